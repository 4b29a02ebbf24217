import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from schrmaxwell import linalg
from conftest import random_hermitian, rk4

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def test_kron_identity_and_layout():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    blocks = linalg.kron(SX, np.eye(2))
    assert np.array_equal(blocks[:2, 2:], np.eye(2)) and np.array_equal(blocks[2:, :2], np.eye(2))
    assert not blocks[:2, :2].any()
    assert np.array_equal(linalg.kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_kron_index_rule_and_associativity(rng):
    # integer entries keep products exact, so associativity can be checked bit-for-bit
    a, b, c = (rng.integers(-5, 6, size=s).astype(complex) for s in ((2, 3), (3, 2), (2, 2)))
    k = linalg.kron(a, b)
    assert k.shape == (6, 6)
    assert k[1 * 3 + 2, 2 * 2 + 1] == a[1, 2] * b[2, 1]
    np.testing.assert_array_equal(linalg.kron(linalg.kron(a, b), c), linalg.kron(a, linalg.kron(b, c)))


def test_kron_large_is_sparse():
    out = linalg.kron(sp.identity(64), sp.identity(32))
    assert sp.issparse(out) and out.shape == (2048, 2048)


def test_hermitian_split_examples():
    h1, h2 = linalg.hermitian_split(np.array([[0, 1], [0, 0]], dtype=complex))
    np.testing.assert_allclose(h1, [[0, 0.5], [0.5, 0]])
    np.testing.assert_allclose(h2, [[0, -0.5j], [0.5j, 0]])


def test_hermitian_split_symmetry_cases(rng):
    h = random_hermitian(rng, 5)
    h1, h2 = linalg.hermitian_split(h)
    np.testing.assert_allclose(h1, h)
    assert np.abs(h2).max() < 1e-15
    k = 1j * h
    h1, h2 = linalg.hermitian_split(k)
    assert np.abs(h1).max() < 1e-15
    np.testing.assert_allclose(h2, k / 1j)


@pytest.mark.parametrize("n", [1, 7, 32])
def test_hermitian_split_reconstruction(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h1, h2 = linalg.hermitian_split(a)
    assert np.abs(h1 + 1j * h2 - a).max() <= 1e-14
    assert linalg.hermitian_deviation(h1) == 0 and linalg.hermitian_deviation(h2) == 0


def test_hermitian_split_rejects_non_square():
    with pytest.raises(ValueError):
        linalg.hermitian_split(np.zeros((2, 3)))


def test_shift_matrix():
    np.testing.assert_array_equal(linalg.shift_matrix(2), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(linalg.shift_matrix(3), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    f = linalg.shift_matrix(4)
    np.testing.assert_array_equal(f @ f.conj().T, np.eye(4))
    with pytest.raises(ValueError):
        linalg.shift_matrix(0)


def test_fourier_frequencies_examples():
    _, nu = linalg.fourier_basis(4, 2.0)
    np.testing.assert_allclose(nu, [-2 * np.pi, -np.pi, 0, np.pi])
    _, nu = linalg.fourier_basis(2, 1.0)
    np.testing.assert_allclose(nu, [-2 * np.pi, 0])
    with pytest.raises(ValueError):
        linalg.fourier_basis(5, 1.0)


def test_fourier_basis_inverse_and_derivative():
    phi, nu = linalg.fourier_basis(8, 3.0)
    np.testing.assert_allclose(phi @ (phi.conj().T / 8), np.eye(8), atol=1e-14)
    deriv = phi @ np.diag(1j * nu) @ phi.conj().T / 8
    np.testing.assert_allclose(deriv @ phi, phi * (1j * nu), atol=1e-10)


def test_fast_transform_matches_basis(rng):
    phi, _ = linalg.fourier_basis(16, 4.0, origin=-2.0)
    vals = rng.normal(size=16) + 1j * rng.normal(size=16)
    coef = linalg.to_fourier(vals, 4.0, origin=-2.0)
    np.testing.assert_allclose(coef, phi.conj().T @ vals / 16, atol=1e-13)
    np.testing.assert_allclose(linalg.from_fourier(coef, 4.0, origin=-2.0), vals, atol=1e-13)


def test_expm_apply_examples():
    out = linalg.expm_apply(SX, np.pi / 2, np.array([1, 0], dtype=complex))
    np.testing.assert_allclose(out, [0, -1j], atol=1e-15)
    v = np.array([1 + 2j, 3])
    np.testing.assert_array_equal(linalg.expm_apply(SX, 0.0, v), v)


def test_expm_apply_matches_rk4(rng):
    h = random_hermitian(rng, 6)
    v = rng.normal(size=6) + 1j * rng.normal(size=6)
    ref = rk4(lambda t, u: -1j * h @ u, v, 1.0, 1e-4)
    got = linalg.expm_apply(h, 1.0, v)
    np.testing.assert_allclose(got, ref, atol=1e-8)
    assert abs(np.linalg.norm(got) - np.linalg.norm(v)) <= 1e-10 * np.linalg.norm(v)


def test_expm_apply_rejects_non_hermitian():
    with pytest.raises(linalg.NotHermitianError) as info:
        linalg.expm_apply(np.array([[0, 1], [0, 0]], dtype=complex), 1.0, np.ones(2))
    assert info.value.deviation == pytest.approx(1.0)


def test_sparse_propagator_blocks_and_fallback(rng):
    # two disconnected blocks plus a large component routed through expm_multiply
    a = random_hermitian(rng, 3)
    b = random_hermitian(rng, 4)
    h = sp.block_diag([a, b, a]).tocsr()
    v = rng.normal(size=10) + 0j
    want = sla.expm(-1j * 0.7 * h.toarray()) @ v
    np.testing.assert_allclose(linalg.HermitianPropagator(h).apply(v, 0.7), want, atol=1e-12)
    n = 1200
    ring = sp.diags([np.ones(n - 1), np.ones(n - 1)], [1, -1], format="csr").astype(complex)
    x = np.zeros(n, complex)
    x[0] = 1
    got = linalg.HermitianPropagator(ring).apply(x, 0.5)
    want = sla.expm(-0.5j * ring.toarray()) @ x
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_store_threshold():
    assert isinstance(linalg.store(np.eye(4)), np.ndarray)
    assert sp.issparse(linalg.store(np.eye(linalg.DENSE_LIMIT)))
    small = sp.identity(8, format="csr")
    np.testing.assert_array_equal(linalg.store(small), np.eye(8))


def test_max_norm_and_sparsity():
    a = np.array([[0, -3, 1], [0, 0, 0], [2j, 0, 0]])
    assert linalg.max_norm(a) == 3
    assert linalg.max_norm(sp.csr_matrix(a)) == 3
    assert linalg.row_sparsity(a) == 2 == linalg.row_sparsity(sp.csr_matrix(a))


def test_max_eigenvalue(rng):
    h = random_hermitian(rng, 9)
    assert linalg.max_eigenvalue(h) == pytest.approx(np.linalg.eigvalsh(h)[-1])
