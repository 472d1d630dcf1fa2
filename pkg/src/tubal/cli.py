"""Command-line front end.

Exit codes: 0 success, 2 bad arguments, 3 I/O or parse failure, 4 numeric
failure, 5 op classified as not tubal.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import catalog, discovery
from .errors import BadDimension, ParityMismatch, ShapeMismatch, TensorFileError, TubalError
from .io import read_tensor, write_tensor
from .tensor import frobenius_norm
from .tsvd import m_rank, multirank, tail_error, truncate_multirank, truncate_rank, tsvd

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_NOT_TUBAL = 5


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, allow_nan=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _load_tensor(path):
    try:
        return read_tensor(path)
    except (OSError, TensorFileError) as exc:
        raise _Fail(EXIT_IO, f"cannot read tensor {path}: {exc}") from None


def _resolve_transform(name, n):
    try:
        return catalog.transform_by_name(name, n)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read transform: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_IO, f"cannot parse transform file: {exc}") from None
    except (ValueError, BadDimension, ParityMismatch, ShapeMismatch) as exc:
        raise _Fail(EXIT_USAGE, f"bad transform {name!r}: {exc}") from None
    except TubalError as exc:
        raise _Fail(EXIT_NUMERIC, f"invalid transform {name!r}: {exc}") from None


def _parse_multirank(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise _Fail(EXIT_USAGE, f"--multirank expects comma-separated integers, got {text!r}") from None


def cmd_compress(args):
    A = _load_tensor(args.input)
    spec = _resolve_transform(args.transform, A.shape[2])
    t0 = time.perf_counter()
    f = tsvd(spec, A)
    if args.rank is not None:
        k = args.rank
        if not 0 <= k <= min(A.shape[:2]):
            raise _Fail(EXIT_USAGE, f"--rank must lie in [0, {min(A.shape[:2])}]")
        Ak = truncate_rank(f, k)
        used = {"rank": k}
        closed = tail_error(f, k=k) if spec.unitary_scale is not None else None
    else:
        r = _parse_multirank(args.multirank)
        try:
            Ak = truncate_multirank(f, r)
        except TubalError as exc:
            raise _Fail(EXIT_USAGE, f"bad --multirank: {exc}") from None
        used = {"multirank": list(r)}
        closed = tail_error(f, r=r) if spec.unitary_scale is not None else None
    elapsed = time.perf_counter() - t0

    norm = frobenius_norm(A)
    err = frobenius_norm(A - Ak)
    report = {
        "transform": spec.name,
        **used,
        "dims": list(A.shape),
        "abs_error": err,
        "relative_error": err / norm if norm > 0 else 0.0,
        "closed_form_error": closed,
        "singular_tube_norms": [float(np.linalg.norm(s)) for s in f.sigma],
        "wall_time_s": elapsed,
    }
    try:
        write_tensor(args.output, Ak)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {args.output}: {exc}") from None
    if args.report:
        _dump_json(report, args.report)
    return EXIT_OK


def cmd_info(args):
    A = _load_tensor(args.input)
    spec = _resolve_transform(args.transform, A.shape[2])
    f = tsvd(spec, A)
    _dump_json(
        {
            "dims": list(A.shape),
            "transform": spec.name,
            "rank": m_rank(f),
            "multirank": list(multirank(f)),
            "singular_tube_norms": [float(np.linalg.norm(s)) for s in f.sigma],
        }
    )
    return EXIT_OK


def _resolve_op(name, n):
    if name.startswith("table:"):
        try:
            return discovery.load_op_table(name[6:])
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot read op table: {exc}") from None
        except (ValueError, ShapeMismatch) as exc:
            raise _Fail(EXIT_IO, f"cannot parse op table: {exc}") from None
    if name.startswith("xor:"):
        try:
            k = int(name[4:])
        except ValueError:
            raise _Fail(EXIT_USAGE, f"expected xor:K, got {name!r}") from None
        if k < 1 or (n is not None and n != 2**k):
            raise _Fail(EXIT_USAGE, f"xor:{k} needs --n {2**k}")
        return catalog.oracle_op("xor_conv", 2**k)
    kinds = {"tprod": "circ_conv", "negacyclic": "negacyclic_conv", "splitc": "split_complex", "dual": "dual_numbers"}
    if name not in kinds:
        raise _Fail(EXIT_USAGE, f"unknown op {name!r}")
    if name in ("splitc", "dual"):
        n = 2 if n is None else n
    if n is None:
        raise _Fail(EXIT_USAGE, f"--op {name} needs --n")
    try:
        return catalog.oracle_op(kinds[name], n)
    except BadDimension as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None


def cmd_discover(args):
    op = _resolve_op(args.op, args.n)
    report = discovery.classify_ring(op, seed=args.seed)
    out = {"op": args.op, "n": op.n, "seed": args.seed, **report.to_dict()}
    try:
        _dump_json(out, args.out)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {args.out}: {exc}") from None
    return EXIT_OK if report.is_tubal else EXIT_NOT_TUBAL


def build_parser():
    parser = argparse.ArgumentParser(prog="tubal", description="Tubal tensor algebra tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="truncated star-M SVD of a tensor file")
    p.add_argument("--input", required=True)
    p.add_argument("--transform", default="dft")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int)
    g.add_argument("--multirank")
    p.add_argument("--output", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("discover", help="recover M from a tubal product")
    p.add_argument("--op", required=True, help="tprod | negacyclic | xor:K | splitc | dual | table:PATH")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("info", help="ranks and singular tubes of a tensor file")
    p.add_argument("--input", required=True)
    p.add_argument("--transform", default="dft")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, 0 on --help
        return exc.code
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"tubal: {exc}", file=sys.stderr)
        return exc.code
    except TubalError as exc:
        print(f"tubal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except np.linalg.LinAlgError as exc:
        print(f"tubal: LinAlgError: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
