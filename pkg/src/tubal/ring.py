"""The commutative ring of tubes under the star-M product.

A tube is a real vector of length ``n``. Every operation here accepts a
single tube of shape ``(n,)`` or a stack of tubes of shape ``(..., n)``;
the transform acts along the last axis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .errors import (
    InvalidRowStructure,
    ParityMismatch,
    ResidualImaginary,
    ShapeMismatch,
    SingularTransform,
)

DEFAULT_TOL = 1e-9
UNITARY_RTOL = 1e-8

_EPS = np.finfo(float).eps


class RealRow(NamedTuple):
    j: int


class ConjPair(NamedTuple):
    j: int
    k: int


RowClass = Union[RealRow, ConjPair]


def _frozen(x):
    x = np.array(x, copy=True)
    x.flags.writeable = False
    return x


@dataclass(frozen=True, eq=False)
class TransformSpec:
    """A validated invertible transform ``M`` defining the ring.

    Build with :func:`validate_transform`, never directly. Instances are
    immutable and compared by identity, which is what transform-domain
    tensors use to detect mixing of domains.
    """

    M: np.ndarray
    M_inv: np.ndarray
    row_classes: tuple
    realness: int
    unitary_scale: float | None
    tol: float
    perm: np.ndarray = field(repr=False)
    name: str = "custom"

    @property
    def n(self) -> int:
        return self.M.shape[0]

    @property
    def is_real_like(self) -> bool:
        return self.realness == self.n

    def __repr__(self):
        return (
            f"TransformSpec(name={self.name!r}, n={self.n}, realness={self.realness}, "
            f"unitary_scale={self.unitary_scale})"
        )


def _classify_rows(M, tol):
    n = M.shape[0]
    scale = np.abs(M).max()
    thr = tol * scale
    is_real = np.abs(M.imag).max(axis=1) <= thr
    classes = []
    partner = [None] * n
    for j in range(n):
        if is_real[j]:
            classes.append(RealRow(j))
            continue
        if partner[j] is not None:
            continue
        cands = [
            k
            for k in range(n)
            if k != j
            and not is_real[k]
            and partner[k] is None
            and np.abs(M[j] - M[k].conj()).max() <= thr
        ]
        if len(cands) != 1:
            what = "no conjugate partner" if not cands else f"ambiguous partners {cands}"
            raise InvalidRowStructure(f"row {j} is complex with {what}")
        k = cands[0]
        partner[j], partner[k] = k, j
        classes.append(ConjPair(j, k))
    return tuple(classes)


def _canonical_order(row_classes):
    reals = [c.j for c in row_classes if isinstance(c, RealRow)]
    pairs = [i for c in row_classes if isinstance(c, ConjPair) for i in (c.j, c.k)]
    return np.array(reals + pairs, dtype=int)


def _detect_unitary_scale(M):
    n = M.shape[0]
    c = np.linalg.norm(M) / np.sqrt(n)
    if c == 0:
        return None
    gram = M.conj().T @ M
    if np.abs(gram - c**2 * np.eye(n)).max() <= UNITARY_RTOL * c**2:
        return float(c)
    return None


def validate_transform(M, tol: float = DEFAULT_TOL, name: str = "custom") -> TransformSpec:
    """Check that ``M`` defines a tubal ring and classify its rows.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Candidate transform, real or complex.
    tol : float
        Relative tolerance used for invertibility, realness of rows and
        conjugate matching.

    Raises
    ------
    SingularTransform
        ``M`` is not invertible within ``tol``.
    InvalidRowStructure
        Some row is neither real nor conjugate to exactly one other row.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ShapeMismatch(f"transform must be a non-empty square matrix, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("transform has non-finite entries")
    n = M.shape[0]
    try:
        M_inv = np.linalg.inv(M)
    except np.linalg.LinAlgError as exc:
        raise SingularTransform(str(exc)) from None
    if not np.all(np.isfinite(M_inv)) or np.abs(M @ M_inv - np.eye(n)).max() > tol:
        raise SingularTransform("M @ inv(M) deviates from the identity")

    row_classes = _classify_rows(M, tol)
    realness = sum(isinstance(c, RealRow) for c in row_classes)
    return TransformSpec(
        M=_frozen(M),
        M_inv=_frozen(M_inv),
        row_classes=row_classes,
        realness=realness,
        unitary_scale=_detect_unitary_scale(M),
        tol=tol,
        perm=_frozen(_canonical_order(row_classes)),
        name=name,
    )


def _check_tube(spec, a, what="tube"):
    a = np.asarray(a, dtype=float)
    if a.ndim == 0 or a.shape[-1] != spec.n:
        raise ShapeMismatch(f"{what} has length {a.shape[-1:] or 0}, ring has n={spec.n}")
    return a


def forward(spec: TransformSpec, a) -> np.ndarray:
    """Transform-domain image ``M a`` of one or more tubes."""
    return _check_tube(spec, a) @ spec.M.T


def strip_imag(z, tol, what="result"):
    """Return ``z.real`` after asserting the imaginary part is negligible."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return z
    re = z.real
    scale = 1.0 + (np.abs(re).max() if re.size else 0.0)
    resid = np.abs(z.imag).max() if z.size else 0.0
    if resid > tol * scale:
        raise ResidualImaginary(
            f"{what} has imaginary residue {resid:.3e} (allowed {tol * scale:.3e})"
        )
    return np.ascontiguousarray(re)


def inverse(spec: TransformSpec, z) -> np.ndarray:
    """Real tube(s) ``M^-1 z``; ``z`` must lie in the image of the reals."""
    z = np.asarray(z)
    return strip_imag(z @ spec.M_inv.T, spec.tol)


def star(spec: TransformSpec, a, b) -> np.ndarray:
    """Tube product ``M^-1 (M a * M b)``."""
    return inverse(spec, forward(spec, a) * forward(spec, b))


def unit(spec: TransformSpec) -> np.ndarray:
    return inverse(spec, np.ones(spec.n))


def conjugate(spec: TransformSpec, a) -> np.ndarray:
    """Ring conjugate ``M^-1 conj(M a)``."""
    return inverse(spec, forward(spec, a).conj())


def weak_inverse(spec: TransformSpec, a, zero_tol: float | None = None) -> np.ndarray:
    """Weak inverse ``M^-1 (M a)^+``.

    Entries of ``M a`` no larger than ``zero_tol * max|M a|`` are treated as
    zero. ``zero_tol`` defaults to ``n * eps``. Conjugate-paired entries
    share a modulus, so they are always kept or dropped together and the
    result stays real.
    """
    z = forward(spec, a)
    if zero_tol is None:
        zero_tol = spec.n * _EPS
    mag = np.abs(z)
    peak = mag.max(axis=-1, keepdims=True)
    keep = mag > zero_tol * peak
    zp = np.zeros_like(z)
    np.divide(1.0, z, out=zp, where=keep)
    return inverse(spec, zp)


def leq(spec: TransformSpec, a, b) -> bool:
    """Partial order: ``a <= b`` iff ``M (b - a)`` is real and non-negative.

    The comparison is made with the spec tolerance, scaled by
    ``1 + max|M (b - a)|``.
    """
    d = forward(spec, np.asarray(b, dtype=float) - np.asarray(a, dtype=float))
    scale = 1.0 + np.abs(d).max()
    thr = spec.tol * scale
    return bool(np.abs(d.imag).max() <= thr and d.real.min() >= -thr)


def _pair_block():
    s = 1 / np.sqrt(2)
    return np.array([[s, -1j * s], [s, 1j * s]])


def canonical_matrix(n: int, m: int) -> np.ndarray:
    if not 0 <= m <= n:
        raise ParityMismatch(f"need 0 <= m <= n, got n={n}, m={m}")
    if (n - m) % 2:
        raise ParityMismatch(f"n={n} and m={m} differ in parity")
    M = np.zeros((n, n), dtype=complex)
    M[:m, :m] = np.eye(m)
    for s in range(m, n, 2):
        M[s : s + 2, s : s + 2] = _pair_block()
    return M


def canonical_transform(n: int, m: int, tol: float = DEFAULT_TOL) -> TransformSpec:
    """Canonical ring with ``m`` real rows and ``(n - m) / 2`` conjugate blocks."""
    return validate_transform(canonical_matrix(n, m), tol=tol, name=f"canonical:{n},{m}")


def isomorphism_to_canonical(spec: TransformSpec) -> np.ndarray:
    """Real matrix ``T`` mapping the ring of ``spec`` onto its canonical ring.

    ``T (x * y) = T x *' T y`` and ``T conj(x) = conj'(T x)``, where the
    primed operations belong to ``canonical_transform(n, spec.realness)``.
    """
    Mp = spec.M[spec.perm]
    C_inv = np.linalg.inv(canonical_matrix(spec.n, spec.realness))
    return strip_imag(C_inv @ Mp, spec.tol, what="canonical isomorphism")


# JSON transform files: {"n": int, "rows": [[[re, im], ...], ...]}


def transform_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"n": int(M.shape[0]), "rows": rows}


def transform_from_json(obj: dict, tol: float = DEFAULT_TOL, name: str = "custom") -> TransformSpec:
    try:
        n = int(obj["n"])
        M = np.array(
            [[complex(float(re), float(im)) for re, im in row] for row in obj["rows"]],
            dtype=complex,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed transform JSON: {exc}") from None
    if M.shape != (n, n):
        raise ShapeMismatch(f"transform JSON declares n={n} but rows form {M.shape}")
    return validate_transform(M, tol=tol, name=name)


def load_transform(path, tol: float = DEFAULT_TOL) -> TransformSpec:
    with open(path) as fh:
        return transform_from_json(json.load(fh), tol=tol, name=f"file:{path}")


def save_transform(spec_or_matrix, path) -> None:
    M = spec_or_matrix.M if isinstance(spec_or_matrix, TransformSpec) else spec_or_matrix
    with open(path, "w") as fh:
        json.dump(transform_to_json(M), fh)
