import numpy as np
import pytest

from tubal import make_transform, oracle_op
from tubal.catalog import (
    circ_conv,
    group_ring_wht_equivalence_check,
    negacyclic_conv,
    transform_by_name,
    xor_conv,
)
from tubal.discovery import equivalent_transforms
from tubal.errors import BadDimension, DuplicateRoots, InvalidRowStructure
from tubal.ring import save_transform, star, unit


def circulant_loop(a, b):
    n = len(a)
    C = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            C[i, j] = a[(i - j) % n]
    return C @ b


def negacyclic_loop(a, b):
    n = len(a)
    full = np.zeros(2 * n - 1)
    for i in range(n):
        for j in range(n):
            full[i + j] += a[i] * b[j]
    out = full[:n].copy()
    out[: n - 1] -= full[n:]
    return out


def xor_loop(a, b):
    n = len(a)
    return np.array([sum(a[j] * b[i ^ j] for j in range(n)) for i in range(n)])


def test_dft2():
    np.testing.assert_allclose(make_transform("dft", 2).M, [[1, 1], [1, -1]], atol=1e-15)


@pytest.mark.parametrize("n", [1, 3, 4, 7])
def test_skew_dft_display(n):
    F = np.array([[np.exp(-2j * np.pi * j * k / n) for k in range(n)] for j in range(n)])
    D = np.diag([np.exp(1j * np.pi * k / n) for k in range(n)])
    np.testing.assert_allclose(make_transform("skew_dft", n).M, F @ D, atol=1e-13)


def test_skew_dft_n2_matches_complex_field_ring():
    a, b = np.random.default_rng(0).standard_normal((2, 2))
    sk = make_transform("skew_dft", 2)
    cf = make_transform("complex_field", 2)
    np.testing.assert_allclose(star(sk, a, b), star(cf, a, b), atol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_vandermonde_at_roots_of_unity_is_dft(n):
    roots = np.exp(-2j * np.pi * np.arange(n)[::-1] / n)
    V = make_transform("vandermonde", roots=roots)
    assert equivalent_transforms(make_transform("dft", n).M, V.M)


def test_vandermonde_duplicate_roots():
    with pytest.raises(DuplicateRoots):
        make_transform("vandermonde", roots=[1.0, 2.0, 1.0])


def test_vandermonde_roots_not_conjugate_closed():
    with pytest.raises(InvalidRowStructure):
        make_transform("vandermonde", roots=[1j, 2.0])


@pytest.mark.parametrize(
    "kind,n",
    [("walsh_hadamard", 6), ("split_complex", 3), ("complex_field", 1), ("dft", 0)],
)
def test_bad_dimension(kind, n):
    with pytest.raises(BadDimension):
        make_transform(kind, n)


@pytest.mark.parametrize(
    "kind,n,scale",
    [("dft", 6, np.sqrt(6)), ("skew_dft", 5, np.sqrt(5)), ("walsh_hadamard", 8, np.sqrt(8)),
     ("split_complex", 2, np.sqrt(2)), ("complex_field", 2, np.sqrt(2)), ("identity", 4, 1.0)],
)
def test_unitary_scale(kind, n, scale):
    assert make_transform(kind, n).unitary_scale == pytest.approx(scale, rel=1e-12)


def test_vandermonde_not_scaled_unitary():
    roots = 2 ** (1 / 3) * np.exp(2j * np.pi * np.arange(3) / 3)
    assert make_transform("vandermonde", roots=roots).unitary_scale is None


class TestOracles:
    def test_circ_example(self):
        np.testing.assert_array_equal(circ_conv(np.array([1.0, 2, 3]), np.array([4.0, 5, 6])), [31, 31, 28])

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 9])
    def test_vectorized_match_loops(self, n):
        rng = np.random.default_rng(n)
        for a, b in rng.standard_normal((10, 2, n)):
            np.testing.assert_allclose(circ_conv(a, b), circulant_loop(a, b), atol=1e-12)
            np.testing.assert_allclose(negacyclic_conv(a, b), negacyclic_loop(a, b), atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
    def test_xor_matches_loop(self, n):
        rng = np.random.default_rng(n)
        for a, b in rng.standard_normal((5, 2, n)):
            np.testing.assert_allclose(xor_conv(a, b), xor_loop(a, b), atol=1e-12)

    def test_dual_numbers(self):
        op = oracle_op("dual_numbers", 2)
        np.testing.assert_array_equal(op([2.0, 3.0], [5.0, 7.0]), [10.0, 2 * 7 + 3 * 5])

    def test_dual_epsilon_annihilates(self):
        op = oracle_op("dual_numbers", 2)
        eps = np.array([0.0, 1.0])
        for x in np.random.default_rng(1).standard_normal((20, 2)):
            np.testing.assert_array_equal(op(op(eps, x), eps), [0.0, 0.0])

    def test_xor_k1_is_circ_n2(self):
        a, b = np.random.default_rng(2).standard_normal((2, 2))
        np.testing.assert_allclose(xor_conv(a, b), circ_conv(a, b), atol=1e-15)

    def test_deterministic(self):
        op = oracle_op("negacyclic_conv", 5)
        a, b = np.random.default_rng(3).standard_normal((2, 5))
        assert op(a, b).tobytes() == op(a, b).tobytes()

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            oracle_op("xor_conv", 6)
        with pytest.raises(BadDimension):
            oracle_op("dual_numbers", 3)

    def test_from_transform(self):
        s = make_transform("dft", 4)
        op = oracle_op(s)
        a, b = np.random.default_rng(4).standard_normal((2, 4))
        np.testing.assert_allclose(op(a, b), circ_conv(a, b), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 17))
def test_star_matches_oracles(n):
    rng = np.random.default_rng(100 + n)
    a, b = rng.standard_normal((2, 100, n))
    assert np.abs(star(make_transform("dft", n), a, b) - circ_conv(a, b)).max() < 1e-10
    assert np.abs(star(make_transform("skew_dft", n), a, b) - negacyclic_conv(a, b)).max() < 1e-10
    if n & (n - 1) == 0:
        assert np.abs(star(make_transform("walsh_hadamard", n), a, b) - xor_conv(a, b)).max() < 1e-10


def test_wht_equivalence_check():
    assert group_ring_wht_equivalence_check(1, trials=50) < 1e-12
    assert group_ring_wht_equivalence_check(3, trials=100) < 1e-10


def test_wht_unit_is_delta():
    s = make_transform("walsh_hadamard", 8)
    e = unit(s)
    np.testing.assert_allclose(e, np.eye(8)[0], atol=1e-15)
    b = np.random.default_rng(5).standard_normal(8)
    np.testing.assert_allclose(xor_conv(e, b), b, atol=1e-15)


class TestNames:
    @pytest.mark.parametrize(
        "name,kind", [("dft", "dft"), ("skew-dft", "skew_dft"), ("wht", "walsh_hadamard"), ("identity", "identity")]
    )
    def test_named(self, name, kind):
        np.testing.assert_array_equal(transform_by_name(name, 4).M, make_transform(kind, 4).M)

    def test_pair_only(self):
        assert transform_by_name("split-complex", 2).realness == 2
        assert transform_by_name("complex-field", 2).realness == 0

    def test_canonical(self):
        assert transform_by_name("canonical:5,3", 5).realness == 3
        with pytest.raises(BadDimension):
            transform_by_name("canonical:5,3", 4)

    def test_file(self, tmp_path):
        path = tmp_path / "t.json"
        save_transform(make_transform("dft", 3), path)
        assert transform_by_name(f"file:{path}", 3).realness == 1
        with pytest.raises(BadDimension):
            transform_by_name(f"file:{path}", 4)

    def test_unknown(self):
        with pytest.raises(ValueError):
            transform_by_name("fourier", 4)
