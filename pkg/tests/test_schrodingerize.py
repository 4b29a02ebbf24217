import numpy as np
import pytest
import scipy.sparse as sp

from schrmaxwell import linalg
from schrmaxwell.schrodingerize import (LinearSystem, RecoverySpec, build, default_p_star,
                                        hamiltonian_stats, homogenize, initial_extension,
                                        make_pgrid, recover)
from conftest import random_hermitian, rk4


def _system(a, b, u0):
    return LinearSystem(np.asarray(a, complex), np.asarray(b, complex), np.asarray(u0, complex))


def test_linear_system_validation():
    with pytest.raises(ValueError):
        _system(np.zeros((2, 3)), [0, 0], [0, 0])
    with pytest.raises(ValueError):
        _system(np.zeros((2, 2)), [0], [0, 0])
    with pytest.raises(ValueError):
        _system(np.zeros((1, 1)), [np.nan], [0])


def test_homogenize_scalar_example():
    h = homogenize(_system([[0]], [1], [2]))
    np.testing.assert_array_equal(linalg.to_dense(h.a), [[0, 1], [0, 0]])
    np.testing.assert_array_equal(h.u0, [2, 1])
    assert h.is_homogeneous


def test_homogenize_zero_source_keeps_dynamics(rng):
    a = rng.normal(size=(3, 3))
    h = homogenize(_system(a, np.zeros(3), np.ones(3)))
    dense = linalg.to_dense(h.a)
    np.testing.assert_array_equal(dense[:3, :3], a)
    assert not dense[3].any() and not dense[:, 3].any()


def test_homogenize_matches_rk4_of_original(rng):
    a = rng.normal(size=(4, 4)) / 2
    b = rng.normal(size=4) + 1j * rng.normal(size=4)
    u0 = rng.normal(size=4) + 0j
    ref = rk4(lambda t, u: a @ u + b, u0, 1.0)
    h = homogenize(_system(a, b, u0))
    ha = linalg.to_dense(h.a)
    got = rk4(lambda t, u: ha @ u, h.u0, 1.0)
    np.testing.assert_allclose(got[:4], ref, atol=1e-8)


def test_homogenize_scale_and_time_dependent_column():
    src = lambda t: np.array([np.cos(t), 0], complex)
    sys = LinearSystem(np.zeros((2, 2), complex), src(0), np.zeros(2, complex),
                       time_dependent_source=src)
    h = homogenize(sys, scale=4.0)
    assert h.u0[-1] == 4.0
    np.testing.assert_allclose(h.source_column(np.pi), [-0.25, 0])
    np.testing.assert_allclose(linalg.to_dense(h.generator(np.pi))[:, -1], [-0.25, 0, 0])


def test_initial_extension_examples(rng):
    pg = make_pgrid(4, -2.0, 2.0)  # points -2, -1, 0, 1
    w = initial_extension([1.0], pg)
    np.testing.assert_allclose(w, np.exp(-np.abs([-2, -1, 0, 1])))
    assert not initial_extension(np.zeros(3), pg).any()
    u0 = rng.normal(size=5) + 1j * rng.normal(size=5)
    pg = make_pgrid(32)
    w = initial_extension(u0, pg)
    expect = np.linalg.norm(u0) ** 2 * np.sum(np.exp(-2 * np.abs(pg.points)))
    assert np.linalg.norm(w) ** 2 == pytest.approx(expect, rel=1e-13)
    # component-major: block j holds component j across the p-grid
    np.testing.assert_allclose(w.reshape(5, 32)[2], u0[2] * np.exp(-np.abs(pg.points)))


def test_pgrid_defaults():
    pg = make_pgrid()
    assert (pg.left, pg.right, pg.n) == (-10.0, 10.0, 128)
    assert pg.dp == pytest.approx(20 / 128)
    assert pg.points[0] == -10 and pg.points[-1] == pytest.approx(10 - pg.dp)
    _, nu = linalg.fourier_basis(128, 20.0)
    np.testing.assert_allclose(pg.freqs, nu)
    assert default_p_star(pg) == pytest.approx(1.09375)


def test_build_symmetry_cases(rng):
    pg = make_pgrid(8)
    h = random_hermitian(rng, 3)
    s = build(_system(1j * h, np.zeros(3), np.ones(3)), pg)
    for hk in s.mode_hamiltonians:
        np.testing.assert_allclose(hk, -h, atol=1e-15)
    s = build(_system(h, np.zeros(3), np.ones(3)), pg)
    for nu, hk in zip(pg.freqs, s.mode_hamiltonians):
        np.testing.assert_allclose(hk, nu * h, atol=1e-14)
    assert len(s.mode_hamiltonians) == pg.n


def test_build_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        build(_system([[0]], [1], [1]), make_pgrid(4))


def test_block_diagonalisation_matches_dense_assembly(rng):
    n, N = 4, 8
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    pg = make_pgrid(N, -3.0, 3.0)
    s = build(_system(a, np.zeros(n), np.ones(n)), pg)
    phi, nu = linalg.fourier_basis(N, 6.0, origin=-3.0)
    dp = phi @ np.diag(nu) @ phi.conj().T / N  # the p-derivative as -i d/dp
    h1, h2 = linalg.hermitian_split(a)
    full = np.kron(h1, dp) - np.kron(h2, np.eye(N))
    basis = np.kron(np.eye(n), phi)
    conj = np.linalg.solve(basis, full @ basis)
    for k in range(N):
        idx = np.arange(n) * N + k
        np.testing.assert_allclose(conj[np.ix_(idx, idx)], s.mode_hamiltonians[k], atol=1e-12)
    off = conj.copy()
    for k in range(N):
        idx = np.arange(n) * N + k
        off[np.ix_(idx, idx)] = 0
    assert np.abs(off).max() < 1e-12


def test_mode_hamiltonians_hermitian(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    s = build(_system(a, np.zeros(6), np.ones(6)), make_pgrid(16))
    assert max(linalg.hermitian_deviation(h) for h in s.mode_hamiltonians) <= 1e-10


def test_recover_identity_pointwise_and_integral():
    pg = make_pgrid(128)
    w = initial_extension([1.0, 2.0], pg)
    for p in pg.points[pg.points > 0][:5]:
        np.testing.assert_allclose(recover(w, pg, RecoverySpec("pointwise", p)), [1, 2], rtol=1e-14)
    np.testing.assert_allclose(recover(w, pg, RecoverySpec("integral")), [1, 2], rtol=1e-14)
    assert not recover(np.zeros_like(w), pg).any()


def test_recover_integral_trapezoid_oracle():
    # plain trapezoid over [0, R] with the continuum 1/(1 - e^{-R}) factor is within 1e-2
    pg = make_pgrid(128)
    p = pg.points[pg.points >= 0]
    vals = np.exp(-p)
    trap = np.sum((vals[1:] + vals[:-1]) / 2) * pg.dp / (1 - np.exp(-10))
    assert abs(trap - 1) < 1e-2
    w = initial_extension([1.0, 2.0], pg)
    np.testing.assert_allclose(recover(w, pg, RecoverySpec("integral")), [1, 2], atol=1e-2)


def test_recover_rejects_bad_p_star():
    pg = make_pgrid(16)
    w = np.zeros(16)
    with pytest.raises(ValueError):
        recover(w, pg, RecoverySpec("pointwise", 1.0))  # off grid
    with pytest.raises(ValueError):
        recover(w, pg, RecoverySpec("pointwise", -1.25))
    with pytest.raises(ValueError):
        RecoverySpec("median")


def _assembled_sparsity(h1, h2, N):
    dp = np.diag(np.arange(1, N + 1, dtype=float))  # generic nonzero diagonal in the Fourier basis
    full = np.kron(h1, dp) - np.kron(h2, np.eye(N))
    return int((np.abs(full) > 0).sum(axis=1).max())


def test_hamiltonian_stats_examples(rng):
    pg = make_pgrid(4)
    h = random_hermitian(rng, 5)
    h[np.abs(h) < 0.5] = 0
    s = build(_system(1j * h, np.zeros(5), np.ones(5)), pg)
    sparsity, bound = hamiltonian_stats(s)
    assert sparsity == linalg.row_sparsity(h)
    assert bound == pytest.approx(np.abs(h).max())
    d = np.diag(rng.normal(size=5))
    s = build(_system(d, np.zeros(5), np.ones(5)), pg)
    assert hamiltonian_stats(s)[0] == 1


def test_hamiltonian_stats_matches_assembly(rng):
    for _ in range(5):
        a = sp.random(8, 8, density=0.25, random_state=rng, dtype=float).toarray()
        a = a + 1j * sp.random(8, 8, density=0.2, random_state=rng).toarray()
        s = build(_system(a, np.zeros(8), np.ones(8)), make_pgrid(4))
        h1, h2 = linalg.hermitian_split(a)
        assert hamiltonian_stats(s)[0] == _assembled_sparsity(h1, h2, 4)
