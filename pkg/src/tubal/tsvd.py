"""Star-M SVD, tubal ranks and optimal truncations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotScaledUnitary, RankOutOfRange, SvdNoConvergence
from .ring import ConjPair, TransformSpec
from .tensor import TransformedTensor, as_tensor, from_transform, to_transform

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class TSVDFactors:
    """``A = U * S * V^H`` with transform-domain caches.

    ``sigma[i]`` is the i-th singular tube and ``sigma_hat[i, j]`` the i-th
    singular value of transform slice ``j``.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    sigma: np.ndarray
    sigma_hat: np.ndarray
    U_hat: np.ndarray
    V_hat: np.ndarray
    spec: TransformSpec

    @property
    def shape(self):
        return self.U.shape[0], self.V.shape[0], self.spec.n


def _fix_phase(Q):
    # make the largest-modulus entry of each column real positive
    idx = np.abs(Q).argmax(axis=0)
    lead = Q[idx, np.arange(Q.shape[1])]
    ph = np.where(lead == 0, 1.0, lead / np.where(lead == 0, 1.0, np.abs(lead)))
    return ph


def _slice_svd(X):
    m, p = X.shape
    if not np.any(X):
        return np.eye(m, dtype=complex), np.zeros(min(m, p)), np.eye(p, dtype=complex)
    try:
        U, s, Vh = np.linalg.svd(X, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SvdNoConvergence(str(exc)) from None
    V = Vh.conj().T
    r = min(m, p)
    ph = _fix_phase(U)
    U = U / ph
    V[:, :r] = V[:, :r] / ph[:r]
    if p > r:
        V[:, r:] = V[:, r:] / _fix_phase(V[:, r:])
    return U.astype(complex), s, V.astype(complex)


def tsvd(spec: TransformSpec, A) -> TSVDFactors:
    """Compute the star-M SVD by a complex SVD of every transform slice.

    For conjugate-paired rows of M the paired slice receives the exact
    conjugate factors, which keeps U, S and V real even where singular
    vectors are not unique (repeated singular values, null spaces).
    """
    A = as_tensor(A, spec)
    m, p, n = A.shape
    r = min(m, p)
    Ahat = to_transform(spec, A).data
    U_hat = np.empty((m, m, n), dtype=complex)
    V_hat = np.empty((p, p, n), dtype=complex)
    s_hat = np.zeros((r, n))
    for cls in spec.row_classes:
        j = cls.j
        X = Ahat[:, :, j]
        if not isinstance(cls, ConjPair):
            X = X.real
        U_hat[:, :, j], s_hat[:, j], V_hat[:, :, j] = _slice_svd(X)
        if isinstance(cls, ConjPair):
            k = cls.k
            U_hat[:, :, k] = U_hat[:, :, j].conj()
            V_hat[:, :, k] = V_hat[:, :, j].conj()
            s_hat[:, k] = s_hat[:, j]

    S_hat = np.zeros((m, p, n), dtype=complex)
    S_hat[np.arange(r), np.arange(r), :] = s_hat
    U = from_transform(spec, TransformedTensor(U_hat, spec))
    V = from_transform(spec, TransformedTensor(V_hat, spec))
    S = from_transform(spec, TransformedTensor(S_hat, spec))
    sigma = S[np.arange(r), np.arange(r), :].copy()
    return TSVDFactors(U, S, V, sigma, s_hat, U_hat, V_hat, spec)


def _threshold(f: TSVDFactors, rank_tol):
    m, p, _ = f.shape
    if rank_tol is None:
        rank_tol = max(m, p) * _EPS
    peak = f.sigma_hat.max() if f.sigma_hat.size else 0.0
    return rank_tol * peak, peak


def multirank(f: TSVDFactors, rank_tol: float | None = None) -> tuple:
    """Per-slice numerical ranks of the transformed tensor."""
    thr, peak = _threshold(f, rank_tol)
    if peak == 0:
        return (0,) * f.spec.n
    return tuple(int(c) for c in (f.sigma_hat > thr).sum(axis=0))


def m_rank(f: TSVDFactors, rank_tol: float | None = None) -> int:
    """Index of the last nonzero singular tube."""
    return max(multirank(f, rank_tol), default=0)


def _check_multirank(f, r):
    m, p, n = f.shape
    r = tuple(int(x) for x in r)
    if len(r) != n:
        raise RankOutOfRange(f"multirank needs {n} entries, got {len(r)}")
    if any(x < 0 or x > min(m, p) for x in r):
        raise RankOutOfRange(f"multirank entries must lie in [0, {min(m, p)}], got {r}")
    for cls in f.spec.row_classes:
        if isinstance(cls, ConjPair) and r[cls.j] != r[cls.k]:
            raise RankOutOfRange(
                f"slices {cls.j} and {cls.k} are conjugate and need equal ranks "
                f"(got {r[cls.j]} and {r[cls.k]}); otherwise the truncation is not real"
            )
    return r


def truncate_multirank(f: TSVDFactors, r) -> np.ndarray:
    """Tensor whose transform slice ``j`` is the rank-``r[j]`` truncated SVD of ``A_hat_j``."""
    r = _check_multirank(f, r)
    m, p, n = f.shape
    out = np.zeros((m, p, n), dtype=complex)
    for j, rj in enumerate(r):
        if rj:
            Uj = f.U_hat[:, :rj, j]
            Vj = f.V_hat[:, :rj, j]
            out[:, :, j] = (Uj * f.sigma_hat[:rj, j]) @ Vj.conj().T
    return from_transform(f.spec, TransformedTensor(out, f.spec))


def truncate_rank(f: TSVDFactors, k: int) -> np.ndarray:
    """Keep the first ``k`` singular tubes: ``U[:, :k] * S[:k, :k] * V[:, :k]^H``."""
    m, p, n = f.shape
    if not 0 <= k <= min(m, p):
        raise RankOutOfRange(f"rank must lie in [0, {min(m, p)}], got {k}")
    return truncate_multirank(f, (k,) * n)


def tail_error(f: TSVDFactors, k: int | None = None, r=None) -> float:
    """Frobenius error of a truncation, from singular values alone.

    Give exactly one of ``k`` (tubal rank) or ``r`` (multirank). Only valid
    when M is a scaled unitary ``cW``; then the squared error is
    ``|c|^-2 * sum_j sum_{i > r_j} sigma_hat[i, j]^2``.
    """
    c = f.spec.unitary_scale
    if c is None:
        raise NotScaledUnitary("closed-form truncation error needs M = cW with W unitary")
    if (k is None) == (r is None):
        raise ValueError("give exactly one of k or r")
    m, p, n = f.shape
    if k is not None:
        if not 0 <= k <= min(m, p):
            raise RankOutOfRange(f"rank must lie in [0, {min(m, p)}], got {k}")
        r = (k,) * n
    r = _check_multirank(f, r)
    rows = np.arange(f.sigma_hat.shape[0])[:, None]
    tail = np.where(rows >= np.array(r)[None, :], f.sigma_hat, 0.0)
    return float(np.sqrt((tail**2).sum()) / c)
