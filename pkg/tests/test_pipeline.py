import numpy as np
import pytest
import scipy.linalg as sla

from schrmaxwell.evolution import EvolutionPlan, reference_solve
from schrmaxwell.linalg import NotHermitianError
from schrmaxwell.pipeline import (WRAP_MARGIN, check_generator, extend_pgrid, growth_range,
                                  schrodingerized_solve, source_scale)
from schrmaxwell.schrodingerize import LinearSystem, RecoverySpec, homogenize, make_pgrid
from conftest import random_hermitian, random_stable


def _augmented_expm(a, b, u0, t):
    n = len(u0)
    big = np.zeros((n + 1, n + 1), complex)
    big[:n, :n], big[:n, n] = a, b
    return (sla.expm(big * t) @ np.r_[u0, 1])[:n]


def test_source_scale_examples():
    sys = LinearSystem(np.zeros((2, 2), complex), np.array([3.0, 4.0], complex), np.zeros(2, complex))
    assert source_scale(sys, 2.0) == pytest.approx(5.0)
    assert source_scale(sys, 0.1) == pytest.approx(2.5)
    small = LinearSystem(np.zeros((1, 1), complex), np.array([0.1], complex), np.zeros(1, complex))
    assert source_scale(small, 1.0) == 1.0
    free = LinearSystem(np.eye(1, dtype=complex), np.zeros(1, complex), np.ones(1, complex))
    assert source_scale(free, 5.0) == 1.0


def test_growth_range_examples():
    sys = LinearSystem(np.diag([-2.0, 0.5]).astype(complex), np.zeros(2, complex), np.ones(2, complex))
    assert growth_range(sys, 1.0) == pytest.approx((-2.0, 0.5))
    skew = LinearSystem(np.array([[0, 1], [-1, 0]], complex), np.zeros(2, complex), np.ones(2, complex))
    assert growth_range(skew, 1.0) == (0.0, 0.0)
    h = homogenize(LinearSystem(np.zeros((1, 1), complex), np.array([2.0], complex), np.zeros(1, complex)))
    assert growth_range(h, 1.0) == pytest.approx((-1.0, 1.0))  # [[0, 2], [0, 0]] has H1 = sigma_x


def test_extend_pgrid_example():
    pg = make_pgrid(16, -4.0, 4.0)
    assert extend_pgrid(pg, 3.0) is pg
    ext = extend_pgrid(pg, 5.2)
    assert ext.dp == pg.dp and ext.left == -4.0
    assert ext.right >= 5.2 and ext.n % 2 == 0 and ext.n == 20


@pytest.mark.parametrize("n_p", [4, 8, 64])
def test_anti_hermitian_source_free_exact_at_any_resolution(rng, n_p):
    h = random_hermitian(rng, 5)
    u0 = rng.normal(size=5) + 1j * rng.normal(size=5)
    sys = LinearSystem(1j * h, np.zeros(5, complex), u0)
    res = schrodingerized_solve(sys, 1.3, make_pgrid(n_p))
    np.testing.assert_allclose(res.u, sla.expm(1.3j * h) @ u0, atol=1e-8)
    assert res.growth == (0.0, 0.0)


def test_stable_system_with_source(rng):
    a = random_stable(rng, 4)
    b = rng.normal(size=4) + 0j
    u0 = rng.normal(size=4) + 0j
    res = schrodingerized_solve(LinearSystem(a.astype(complex), b, u0), 1.0, make_pgrid(256))
    ref = _augmented_expm(a, b, u0, 1.0)
    assert np.linalg.norm(res.u - ref) <= 5e-2 * np.linalg.norm(ref)
    assert res.p_star >= 1.0 and res.method == "exact_expm"


def test_p_grid_extended_for_dissipation(rng):
    a = np.diag([-8.0, -1.0]).astype(complex)
    sys = LinearSystem(a, np.zeros(2, complex), np.ones(2, complex))
    res = schrodingerized_solve(sys, 1.0, make_pgrid(64))
    assert res.pgrid.right >= res.p_star + 8.0 + WRAP_MARGIN - 1e-12
    np.testing.assert_allclose(res.u, np.exp([-8.0, -1.0]), atol=5e-2)
    fixed = schrodingerized_solve(sys, 1.0, make_pgrid(64), auto_extend=False)
    assert fixed.pgrid.n == 64


def test_growing_system_moves_recovery_point():
    sys = LinearSystem(np.diag([1.5, -0.5]).astype(complex), np.zeros(2, complex), np.ones(2, complex))
    res = schrodingerized_solve(sys, 2.0, make_pgrid(256))
    assert res.p_star >= 3.5
    np.testing.assert_allclose(res.u, np.exp([3.0, -1.0]), rtol=5e-2)


def test_time_dependent_source_backward_euler(rng):
    a = random_stable(rng, 3)
    src = lambda t: np.array([np.cos(t), np.sin(2 * t), 0.5], complex)
    sys = LinearSystem(a.astype(complex), src(0), rng.normal(size=3) + 0j, time_dependent_source=src)
    res = schrodingerized_solve(sys, 1.0, make_pgrid(128), plan=EvolutionPlan("backward_euler", 1.0, 1e-3))
    assert res.method == "backward_euler"
    ref = reference_solve(sys, 1.0)
    assert np.linalg.norm(res.u - ref) <= 5e-2 * np.linalg.norm(ref)


def test_integral_recovery(rng):
    a = random_stable(rng, 3)
    u0 = rng.normal(size=3) + 0j
    sys = LinearSystem(a.astype(complex), np.zeros(3, complex), u0)
    res = schrodingerized_solve(sys, 1.0, make_pgrid(256), RecoverySpec("integral"))
    ref = sla.expm(a) @ u0
    assert res.p_star is None
    assert np.linalg.norm(res.u - ref) <= 5e-2 * np.linalg.norm(ref)


def test_zero_time_returns_initial_data(rng):
    u0 = rng.normal(size=3) + 1j * rng.normal(size=3)
    sys = LinearSystem(random_stable(rng, 3).astype(complex), np.ones(3, complex), u0)
    res = schrodingerized_solve(sys, 0.0)
    np.testing.assert_array_equal(res.u, u0)
    assert res.w_norm == res.w0_norm


def test_check_generator(rng):
    check_generator(LinearSystem(random_stable(rng, 3).astype(complex), np.zeros(3), np.ones(3)))
    with pytest.raises(NotHermitianError):
        from schrmaxwell import linalg
        linalg.check_hermitian(np.array([[0, 1], [0, 0]], complex))
