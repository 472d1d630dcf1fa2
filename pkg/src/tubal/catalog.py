"""Named tubal rings and transform-free reference products.

The reference products (``oracle_op``) are direct O(n^2) sums over index
tables and never touch a transform matrix, so they can serve as independent
witnesses for :func:`tubal.ring.star`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadDimension, DuplicateRoots
from .ring import (
    DEFAULT_TOL,
    TransformSpec,
    canonical_matrix,
    load_transform,
    star,
    validate_transform,
)

KINDS = (
    "dft",
    "skew_dft",
    "walsh_hadamard",
    "split_complex",
    "complex_field",
    "identity",
    "canonical",
    "vandermonde",
)


def _is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


def dft_matrix(n: int) -> np.ndarray:
    """Unnormalized DFT, ``F[j, k] = exp(-2 pi i j k / n)``."""
    jk = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * jk / n)


def skew_dft_matrix(n: int) -> np.ndarray:
    return dft_matrix(n) * np.exp(1j * np.pi * np.arange(n) / n)[None, :]


def hadamard_matrix(n: int) -> np.ndarray:
    """Sylvester +-1 Hadamard matrix, ``H[i, j] = (-1)^popcount(i & j)``."""
    if not _is_pow2(n):
        raise BadDimension(f"Walsh-Hadamard needs a power of two, got n={n}")
    H = np.ones((1, 1))
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H


def vandermonde_matrix(roots, tol: float = DEFAULT_TOL) -> np.ndarray:
    roots = np.asarray(roots, dtype=complex).ravel()
    if roots.size == 0:
        raise BadDimension("need at least one root")
    scale = max(1.0, np.abs(roots).max())
    gaps = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() <= tol * scale:
        raise DuplicateRoots("repeated roots give a polynomial quotient that is not a tubal ring")
    return roots[:, None] ** np.arange(roots.size)[None, :]


def make_transform(
    kind: str,
    n: int | None = None,
    *,
    m: int | None = None,
    roots=None,
    tol: float = DEFAULT_TOL,
) -> TransformSpec:
    """Construct and validate one of the named transforms.

    ``canonical`` takes the realness through ``m``; ``vandermonde`` takes
    its evaluation points through ``roots`` (``n`` is then implied).
    """
    if kind == "vandermonde":
        if roots is None:
            raise ValueError("vandermonde needs roots")
        V = vandermonde_matrix(roots, tol)
        if n is not None and n != V.shape[0]:
            raise BadDimension(f"{V.shape[0]} roots given for n={n}")
        return validate_transform(V, tol=tol, name="vandermonde")
    if n is None or n < 1:
        raise BadDimension(f"n must be a positive integer, got {n}")
    if kind == "dft":
        M = dft_matrix(n)
    elif kind == "skew_dft":
        M = skew_dft_matrix(n)
    elif kind == "walsh_hadamard":
        M = hadamard_matrix(n)
    elif kind in ("split_complex", "complex_field"):
        if n != 2:
            raise BadDimension(f"{kind} is only defined for n=2")
        M = np.array([[1, 1], [1, -1]]) if kind == "split_complex" else np.array([[1, 1j], [1, -1j]])
    elif kind == "identity":
        M = np.eye(n)
    elif kind == "canonical":
        M = canonical_matrix(n, n if m is None else m)
        kind = f"canonical:{n},{n if m is None else m}"
    else:
        raise ValueError(f"unknown transform kind {kind!r}")
    return validate_transform(M, tol=tol, name=kind)


_CLI_NAMES = {
    "dft": "dft",
    "skew-dft": "skew_dft",
    "wht": "walsh_hadamard",
    "split-complex": "split_complex",
    "complex-field": "complex_field",
    "identity": "identity",
}


def transform_by_name(name: str, n: int, tol: float = DEFAULT_TOL) -> TransformSpec:
    """Resolve a command-line transform name at tube length ``n``.

    Accepts ``dft``, ``skew-dft``, ``wht``, ``split-complex``,
    ``complex-field``, ``identity``, ``canonical:N,M`` and ``file:PATH``.
    """
    if name.startswith("file:"):
        spec = load_transform(name[5:], tol=tol)
        if spec.n != n:
            raise BadDimension(f"transform file has n={spec.n}, tensor tubes have n={n}")
        return spec
    if name.startswith("canonical:"):
        try:
            cn, cm = (int(t) for t in name[10:].split(","))
        except ValueError:
            raise ValueError(f"expected canonical:N,M, got {name!r}") from None
        if cn != n:
            raise BadDimension(f"{name} does not match tube length {n}")
        return make_transform("canonical", cn, m=cm, tol=tol)
    if name not in _CLI_NAMES:
        raise ValueError(f"unknown transform {name!r}")
    return make_transform(_CLI_NAMES[name], n, tol=tol)


@dataclass(frozen=True)
class BlackBoxOp:
    """A binary operation on R^n known only through evaluation.

    ``samples`` optionally carries recorded ``(a, b, result)`` triples that
    any fitted transform must also reproduce (used for op tables).
    """

    n: int
    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "op"
    samples: tuple = field(default=(), repr=False)

    def __call__(self, a, b):
        return np.asarray(self.eval(np.asarray(a, dtype=float), np.asarray(b, dtype=float)), dtype=float)


def circ_conv(a, b):
    """``circ(a) @ b``: ``c_i = sum_j a_j b_{(i - j) mod n}``."""
    n = a.shape[-1]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return (a[..., None, :] * b[..., idx]).sum(-1)


def negacyclic_conv(a, b):
    """Coefficients of ``a(X) b(X) mod X^n + 1``."""
    n = a.shape[-1]
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    sign = np.where(j <= i, 1.0, -1.0)
    return (a[..., None, :] * b[..., (i - j) % n] * sign).sum(-1)


def xor_conv(a, b):
    """Group-ring product over (Z_2)^k: ``c_i = sum_j a_j b_{i xor j}``."""
    n = a.shape[-1]
    if not _is_pow2(n):
        raise BadDimension(f"XOR convolution needs n a power of two, got {n}")
    idx = np.arange(n)[:, None] ^ np.arange(n)[None, :]
    return (a[..., None, :] * b[..., idx]).sum(-1)


def dual_product(a, b):
    """Dual numbers ``(a1 + a2 e)(b1 + b2 e)`` with ``e^2 = 0``."""
    a1, a2 = a[..., 0], a[..., 1]
    b1, b2 = b[..., 0], b[..., 1]
    return np.stack([a1 * b1, a1 * b2 + a2 * b1], axis=-1)


def split_complex_product(a, b):
    """Split-complex numbers ``(a1 + a2 j)(b1 + b2 j)`` with ``j^2 = 1``."""
    a1, a2 = a[..., 0], a[..., 1]
    b1, b2 = b[..., 0], b[..., 1]
    return np.stack([a1 * b1 + a2 * b2, a1 * b2 + a2 * b1], axis=-1)


def complex_product(a, b):
    a1, a2 = a[..., 0], a[..., 1]
    b1, b2 = b[..., 0], b[..., 1]
    return np.stack([a1 * b1 - a2 * b2, a1 * b2 + a2 * b1], axis=-1)


_ORACLES = {
    "circ_conv": circ_conv,
    "negacyclic_conv": negacyclic_conv,
    "xor_conv": xor_conv,
    "dual_numbers": dual_product,
    "split_complex": split_complex_product,
    "complex_field": complex_product,
}


def oracle_op(kind, n: int | None = None) -> BlackBoxOp:
    """Reference product as a black box.

    ``kind`` is one of the oracle names above, or a :class:`TransformSpec`
    (then the op is ``star`` under that spec and ``n`` is implied).
    """
    if isinstance(kind, TransformSpec):
        spec = kind
        return BlackBoxOp(spec.n, lambda a, b: star(spec, a, b), name=f"star[{spec.name}]")
    if kind not in _ORACLES:
        raise ValueError(f"unknown oracle {kind!r}")
    if n is None or n < 1:
        raise BadDimension(f"n must be a positive integer, got {n}")
    if kind in ("dual_numbers", "split_complex", "complex_field") and n != 2:
        raise BadDimension(f"{kind} is only defined for n=2")
    if kind == "xor_conv" and not _is_pow2(n):
        raise BadDimension(f"xor_conv needs n a power of two, got {n}")
    return BlackBoxOp(n, _ORACLES[kind], name=kind)


def group_ring_wht_equivalence_check(k: int, trials: int = 100, seed: int = 0) -> float:
    """Max deviation between XOR convolution and the Walsh-Hadamard star product."""
    if k < 1:
        raise BadDimension("k must be >= 1")
    n = 2**k
    spec = make_transform("walsh_hadamard", n)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((trials, n))
    b = rng.standard_normal((trials, n))
    return float(np.abs(xor_conv(a, b) - star(spec, a, b)).max())
