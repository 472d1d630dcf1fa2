"""Shared fixtures-as-functions: spec catalogs, random data, direct oracles."""
import numpy as np

from tubal import make_transform, validate_transform
from tubal.catalog import dft_matrix
from tubal.ring import ConjPair, RealRow, conjugate, inverse, star


def catalog_specs(max_n=8):
    """Every named transform at every admissible n <= max_n."""
    specs = []
    for n in range(1, max_n + 1):
        specs.append(make_transform("dft", n))
        specs.append(make_transform("skew_dft", n))
        specs.append(make_transform("identity", n))
        for m in range(n % 2, n + 1, 2):
            specs.append(make_transform("canonical", n, m=m))
        if n & (n - 1) == 0:
            specs.append(make_transform("walsh_hadamard", n))
    specs.append(make_transform("split_complex", 2))
    specs.append(make_transform("complex_field", 2))
    return specs


def scaled_unitary_specs():
    """A compact set of M = cW specs used where the full catalog is too slow."""
    return [
        make_transform("dft", 4),
        make_transform("dft", 5),
        make_transform("skew_dft", 4),
        make_transform("walsh_hadamard", 4),
        make_transform("identity", 3),
        make_transform("canonical", 5, m=1),
        make_transform("canonical", 4, m=0),
        make_transform("split_complex", 2),
        make_transform("complex_field", 2),
    ]


def vandermonde_spec(n):
    """Not a scaled unitary: Vandermonde at the roots of X^n - 2."""
    roots = 2 ** (1 / n) * np.exp(2j * np.pi * np.arange(n) / n)
    return make_transform("vandermonde", roots=roots)


def dw_spec():
    """M = D W with real diagonal D (constant on conjugate pairs) and unitary W."""
    W = dft_matrix(4) / 2
    D = np.diag([1.0, 2.0, 3.0, 2.0])  # rows 1 and 3 of DFT_4 are paired
    return validate_transform(D @ W, name="dw")


def spec_id(spec):
    return f"{spec.name}-n{spec.n}"


def rand_tubes(rng, spec, count):
    return rng.standard_normal((count, spec.n))


def positive_transform_vector(rng, spec, zeros=()):
    """Real non-negative vector in the transform domain that maps back to a real tube."""
    d = np.abs(rng.standard_normal(spec.n)) + 0.1
    for cls in spec.row_classes:
        if isinstance(cls, ConjPair):
            d[cls.k] = d[cls.j]
    for z in zeros:
        d[z] = 0.0
    return d


def tube_with_transform_zeros(rng, spec, n_zero_classes=1):
    """Random real tube whose transform vanishes on some row classes."""
    z = (rng.standard_normal(spec.n) + 1j * rng.standard_normal(spec.n)).astype(complex)
    for cls in spec.row_classes:
        if isinstance(cls, RealRow):
            z[cls.j] = z[cls.j].real
        else:
            z[cls.k] = z[cls.j].conj()
    for cls in spec.row_classes[:n_zero_classes]:
        z[list(cls)] = 0.0
    return inverse(spec, z)


def direct_tensor_star(spec, A, B):
    """Definition by tube sums: C_ij = sum_k A_ik * B_kj."""
    m, p, n = A.shape
    _, l, _ = B.shape
    C = np.zeros((m, l, n))
    for i in range(m):
        for j in range(l):
            for k in range(p):
                C[i, j] += star(spec, A[i, k], B[k, j])
    return C


def direct_herm_transpose(spec, A):
    m, p, _ = A.shape
    out = np.empty((p, m, spec.n))
    for i in range(p):
        for j in range(m):
            out[i, j] = conjugate(spec, A[j, i])
    return out


def triple_loop_matmul(X, Y):
    m, p = X.shape
    _, l = Y.shape
    out = np.zeros((m, l), dtype=complex)
    for i in range(m):
        for j in range(l):
            for k in range(p):
                out[i, j] += X[i, k] * Y[k, j]
    return out


def rel(x, y):
    x, y = np.asarray(x), np.asarray(y)
    return float(np.abs(x - y).max() / max(1.0, np.abs(y).max()))
