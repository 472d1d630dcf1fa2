"""Recovering the transform M from a black-box tubal product.

``find_transform`` probes the op on standard basis vectors, diagonalizes the
representation matrix of a random element and reads M off the eigenbasis.
For a genuine star-M product the recovered matrix equals M up to a row
permutation (the unit forces ``M e = 1``, which pins the row scaling).
"""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .catalog import BlackBoxOp
from .errors import (
    InvalidRowStructure,
    NotDiagonalizable,
    ResidualTooLarge,
    ShapeMismatch,
    SingularTransform,
)
from .ring import ConjPair, RealRow, TransformSpec, star, validate_transform, weak_inverse

COND_CAP = 1e8
RESIDUAL_TOL = 1e-8
CHECK_PAIRS = 100


@dataclass(frozen=True, eq=False)
class RepMatrix:
    """``R[:, i] = op(base, e_i)``, so ``R @ x == op(base, x)``."""

    base: np.ndarray
    R: np.ndarray


class Reason(str, enum.Enum):
    NOT_DIAGONALIZABLE = "NotDiagonalizable"
    RESIDUAL_TOO_LARGE = "ResidualTooLarge"
    NOT_COMMUTATIVE = "NotCommutative"
    NOT_ASSOCIATIVE = "NotAssociative"


@dataclass
class Diagnostics:
    eigvec_cond: float = float("nan")
    max_residual: float = float("nan")
    realness: int | None = None
    trials_used: int = 0
    commutativity_residual: float | None = None
    associativity_residual: float | None = None
    bilinearity_residual: float | None = None
    note: str = ""


@dataclass
class DiscoveryReport:
    """Verdict of :func:`classify_ring`.

    A tubal verdict is a certificate: the returned spec reproduced the op on
    random pairs. A non-tubal verdict is evidence only; the eigenvector method is not
    guaranteed to fail on every non-tubal op.
    """

    spec: TransformSpec | None
    reason: Reason | None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    @property
    def is_tubal(self) -> bool:
        return self.spec is not None

    def to_dict(self) -> dict:
        from .ring import transform_to_json

        out = {
            "verdict": "Tubal" if self.is_tubal else "NotTubal",
            "reason": None if self.reason is None else self.reason.value,
            "diagnostics": asdict(self.diagnostics),
        }
        if self.is_tubal:
            out["M"] = transform_to_json(self.spec.M)
            out["realness"] = self.spec.realness
        return out


def representation_matrix(op: BlackBoxOp, a) -> RepMatrix:
    a = np.asarray(a, dtype=float)
    if a.shape != (op.n,):
        raise ShapeMismatch(f"expected a tube of length {op.n}, got shape {a.shape}")
    eye = np.eye(op.n)
    R = np.column_stack([op(a, eye[i]) for i in range(op.n)])
    return RepMatrix(a.copy(), R)


def _rel_residual(x, y):
    return float(np.abs(x - y).max() / (1.0 + np.abs(y).max()))


def _symmetrize(M, spec):
    # snap real rows to real and paired rows to exact conjugates
    M = M.copy()
    for cls in spec.row_classes:
        if isinstance(cls, RealRow):
            M[cls.j] = M[cls.j].real
        else:
            avg = 0.5 * (M[cls.j] + M[cls.k].conj())
            M[cls.j], M[cls.k] = avg, avg.conj()
    return M


def _product_residual(op, spec, rng, pairs):
    a = rng.standard_normal((pairs, op.n))
    b = rng.standard_normal((pairs, op.n))
    worst = 0.0
    for ai, bi in zip(a, b):
        worst = max(worst, _rel_residual(star(spec, ai, bi), op(ai, bi)))
    for sa, sb, sc in op.samples:
        worst = max(worst, _rel_residual(star(spec, sa, sb), np.asarray(sc, dtype=float)))
    return worst


def find_transform(
    op: BlackBoxOp,
    seed: int = 0,
    max_retries: int = 5,
    *,
    cond_cap: float = COND_CAP,
    residual_tol: float = RESIDUAL_TOL,
    check_pairs: int = CHECK_PAIRS,
    tol: float = 1e-8,
    diagnostics: Diagnostics | None = None,
) -> TransformSpec:
    """Recover M such that ``op(a, b) == star(M, a, b)``.

    Raises
    ------
    NotDiagonalizable
        Every one of ``max_retries`` random elements had an eigenvector
        matrix with condition number above ``cond_cap``.
    ResidualTooLarge
        A transform was extracted but it does not reproduce the op.
    """
    diag = diagnostics if diagnostics is not None else Diagnostics()
    rng = np.random.default_rng(seed)
    n = op.n
    eye = np.eye(n)
    R_basis = [representation_matrix(op, eye[i]).R for i in range(n)]

    S = None
    best = np.inf
    for attempt in range(1, max_retries + 1):
        diag.trials_used = attempt
        x = rng.standard_normal(n)
        R_x = representation_matrix(op, x).R
        if not np.all(np.isfinite(R_x)):
            break
        _, vecs = np.linalg.eig(R_x)
        cond = np.linalg.cond(vecs)
        cond = cond if np.isfinite(cond) else np.inf
        best = min(best, cond)
        diag.eigvec_cond = float(best)
        if cond <= cond_cap:
            S = vecs
            diag.eigvec_cond = float(cond)
            break
    if S is None:
        raise NotDiagonalizable(
            f"representation matrix not diagonalizable (best eigenvector condition {best:.3e})",
            diag,
        )

    y = S @ np.ones(n)
    S_inv = np.linalg.inv(S)
    M = np.column_stack([S_inv @ (R_basis[i] @ y) for i in range(n)])

    try:
        spec = validate_transform(M, tol=tol, name=f"recovered[{op.name}]")
        spec = validate_transform(_symmetrize(M, spec), tol=tol, name=spec.name)
    except (SingularTransform, InvalidRowStructure) as exc:
        diag.note = f"{type(exc).__name__}: {exc}"
        raise ResidualTooLarge(f"extracted matrix is not a valid transform ({exc})", diag) from None
    diag.realness = spec.realness

    try:
        resid = _product_residual(op, spec, rng, check_pairs)
    except Exception as exc:  # op or star blew up on a probe
        diag.note = f"{type(exc).__name__}: {exc}"
        raise ResidualTooLarge(f"residual check failed ({exc})", diag) from None
    diag.max_residual = resid
    if not resid <= residual_tol:
        raise ResidualTooLarge(f"recovered transform misses the op by {resid:.3e}", diag)
    return spec


def _precheck(op, rng, trials):
    n = op.n
    comm = assoc = bilin = 0.0
    for _ in range(trials):
        a, b, c = rng.standard_normal((3, n))
        al, be = rng.standard_normal(2)
        ab = op(a, b)
        comm = max(comm, _rel_residual(op(b, a), ab))
        assoc = max(assoc, _rel_residual(op(ab, c), op(a, op(b, c))))
        lin = al * op(a, c) + be * op(b, c)
        bilin = max(bilin, _rel_residual(op(al * a + be * b, c), lin))
    return comm, assoc, bilin


def classify_ring(op: BlackBoxOp, seed: int = 0, trials: int = 20, max_retries: int = 5) -> DiscoveryReport:
    """Decide whether ``op`` is a star-M product, with diagnostics.

    Commutativity and associativity are checked on random samples first;
    bilinearity is measured and reported, and any failure of it surfaces
    through the final product residual.
    """
    rng = np.random.default_rng(seed)
    diag = Diagnostics()
    comm, assoc, bilin = _precheck(op, rng, trials)
    diag.commutativity_residual = comm
    diag.associativity_residual = assoc
    diag.bilinearity_residual = bilin
    if not comm <= RESIDUAL_TOL:
        return DiscoveryReport(None, Reason.NOT_COMMUTATIVE, diag)
    if not assoc <= RESIDUAL_TOL:
        return DiscoveryReport(None, Reason.NOT_ASSOCIATIVE, diag)
    try:
        spec = find_transform(op, seed=seed, max_retries=max_retries, diagnostics=diag)
    except NotDiagonalizable:
        return DiscoveryReport(None, Reason.NOT_DIAGONALIZABLE, diag)
    except ResidualTooLarge:
        return DiscoveryReport(None, Reason.RESIDUAL_TOO_LARGE, diag)
    return DiscoveryReport(spec, None, diag)


def equivalent_transforms(M1, M2, tol: float = 1e-8) -> bool:
    """True iff ``M2 = D P M1`` for a permutation P and invertible diagonal D.

    Rows are matched greedily: each row of ``M2`` takes the first unused row
    of ``M1`` that it is a nonzero scalar multiple of.
    """
    M1 = np.asarray(M1, dtype=complex)
    M2 = np.asarray(M2, dtype=complex)
    if M1.shape != M2.shape or M1.ndim != 2:
        return False
    thr = tol * np.abs(M2).max()
    used = set()
    for row in M2:
        for s, cand in enumerate(M1):
            if s in used:
                continue
            denom = np.vdot(cand, cand)
            if denom == 0:
                continue
            d = np.vdot(cand, row) / denom
            if abs(d) > 0 and np.abs(row - d * cand).max() <= thr:
                used.add(s)
                break
        else:
            return False
    return True


def idempotent_of(spec: TransformSpec, a) -> np.ndarray:
    """``a * a^-``, an idempotent of the ring."""
    return star(spec, a, weak_inverse(spec, a))


# Op tables: {"n": int, "probes": [{"a": [...], "b": [...], "result": [...]}, ...]}


def write_op_table(op: BlackBoxOp, path, extra: int = 0, seed: int = 0) -> None:
    """Record ``op`` on all basis pairs plus ``extra`` random pairs."""
    n = op.n
    eye = np.eye(n)
    pairs = [(eye[i], eye[j]) for i in range(n) for j in range(n)]
    rng = np.random.default_rng(seed)
    pairs += [tuple(rng.standard_normal((2, n))) for _ in range(extra)]
    probes = [{"a": a.tolist(), "b": b.tolist(), "result": op(a, b).tolist()} for a, b in pairs]
    with open(path, "w") as fh:
        json.dump({"n": n, "probes": probes}, fh)


def op_from_table(obj: dict, name: str = "table") -> BlackBoxOp:
    """Least-squares bilinear fit of a sampled op.

    The fitted structure constants answer arbitrary queries; the raw probes
    ride along as ``samples`` so any recovered transform must match them too.
    """
    try:
        n = int(obj["n"])
        probes = obj["probes"]
        A = np.array([p["a"] for p in probes], dtype=float)
        B = np.array([p["b"] for p in probes], dtype=float)
        C = np.array([p["result"] for p in probes], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed op table: {exc}") from None
    if A.ndim != 2 or A.shape[1:] != (n,) or B.shape != A.shape or C.shape != A.shape:
        raise ShapeMismatch(f"op table probes must all have length n={n}")
    design = np.einsum("ti,tj->tij", A, B).reshape(len(A), n * n)
    if np.linalg.matrix_rank(design) < n * n:
        raise ValueError(f"op table does not determine a bilinear op (need {n * n} independent probes)")
    coef, *_ = np.linalg.lstsq(design, C, rcond=None)
    T = coef.reshape(n, n, n)  # T[i, j, :] = op(e_i, e_j)

    def evaluate(a, b):
        return np.einsum("...i,...j,ijk->...k", a, b, T)

    samples = tuple(zip(A, B, C))
    return BlackBoxOp(n, evaluate, name=name, samples=samples)


def load_op_table(path) -> BlackBoxOp:
    with open(path) as fh:
        return op_from_table(json.load(fh), name=f"table:{path}")
