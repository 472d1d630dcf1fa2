"""Third-order tensors as matrices of tubes.

Tensors are plain real ``ndarray`` objects of shape ``(m, p, n)``: entry
``A[i, j, :]`` is the tube in row ``i``, column ``j``, and ``A[:, :, k]`` is
frontal slice ``k``. Oriented matrices are tensors with ``p == 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, SpecMismatch
from .ring import TransformSpec, conjugate, star, strip_imag, unit


def as_tensor(A, spec: TransformSpec | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 3:
        raise ShapeMismatch(f"expected a third-order tensor, got shape {A.shape}")
    if spec is not None and A.shape[2] != spec.n:
        raise ShapeMismatch(f"tube length {A.shape[2]} does not match n={spec.n}")
    if not np.all(np.isfinite(A)):
        raise ValueError("tensor has non-finite entries")
    return A


def twist(X) -> np.ndarray:
    """``m x n`` matrix -> ``m x 1 x n`` oriented matrix (rows become tubes)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeMismatch(f"twist expects a matrix, got shape {X.shape}")
    return X[:, None, :].copy()


def squeeze(U) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.ndim != 3 or U.shape[1] != 1:
        raise ShapeMismatch(f"squeeze expects an m x 1 x n tensor, got shape {U.shape}")
    return U[:, 0, :].copy()


@dataclass(frozen=True, eq=False)
class TransformedTensor:
    """``A x_3 M``: complex tensor tied to the spec that produced it."""

    data: np.ndarray
    spec: TransformSpec

    @property
    def shape(self):
        return self.data.shape

    def slice(self, k: int) -> np.ndarray:
        return self.data[:, :, k]


def to_transform(spec: TransformSpec, A) -> TransformedTensor:
    A = as_tensor(A, spec)
    return TransformedTensor(A @ spec.M.T, spec)


def from_transform(spec: TransformSpec, Ahat: TransformedTensor) -> np.ndarray:
    if Ahat.spec is not spec:
        raise SpecMismatch(f"tensor was transformed under {Ahat.spec!r}, not {spec!r}")
    return strip_imag(Ahat.data @ spec.M_inv.T, spec.tol, what="inverse transform")


def facewise_product(Ahat: TransformedTensor, Bhat: TransformedTensor) -> TransformedTensor:
    """Slice-by-slice matrix product ``C_k = A_k B_k``."""
    if Ahat.spec is not Bhat.spec:
        raise SpecMismatch("operands were transformed under different specs")
    (m, p, n), (p2, l, n2) = Ahat.shape, Bhat.shape
    if p != p2 or n != n2:
        raise ShapeMismatch(f"cannot multiply facewise {Ahat.shape} by {Bhat.shape}")
    return TransformedTensor(np.einsum("ipk,plk->ilk", Ahat.data, Bhat.data), Ahat.spec)


def tensor_star(spec: TransformSpec, A, B) -> np.ndarray:
    A, B = as_tensor(A, spec), as_tensor(B, spec)
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"inner dimensions differ: {A.shape} vs {B.shape}")
    return from_transform(spec, facewise_product(to_transform(spec, A), to_transform(spec, B)))


def herm_transpose(spec: TransformSpec, A) -> np.ndarray:
    """Tube ``(i, j)`` of the result is the ring conjugate of tube ``(j, i)``."""
    A = as_tensor(A, spec)
    return conjugate(spec, A.transpose(1, 0, 2))


def identity_tensor(spec: TransformSpec, m: int) -> np.ndarray:
    if m < 1:
        raise ShapeMismatch("identity tensor needs m >= 1")
    eye = np.zeros((m, m, spec.n))
    eye[np.arange(m), np.arange(m), :] = unit(spec)
    return eye


def mdot(spec: TransformSpec, U, V) -> np.ndarray:
    """Tube-valued inner product ``sum_i conj(u_i) * v_i`` of oriented matrices."""
    U, V = as_tensor(U, spec), as_tensor(V, spec)
    if U.shape != V.shape or U.shape[1] != 1:
        raise ShapeMismatch(f"mdot needs equal m x 1 x n operands, got {U.shape} and {V.shape}")
    return star(spec, conjugate(spec, U[:, 0, :]), V[:, 0, :]).sum(axis=0)


def frobenius_inner(A, B) -> float:
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return float(np.vdot(A, B))


def frobenius_norm(A) -> float:
    return float(np.linalg.norm(np.asarray(A).ravel()))
