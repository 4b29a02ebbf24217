"""End-to-end Schrodingerised solve: homogenize, lift, evolve, recover."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import linalg
from .evolution import EvolutionPlan, evolve_backward_euler, evolve_exact
from .schrodingerize import (PGrid, RecoverySpec, _bordered, build, default_p_star, homogenize,
                             initial_extension, make_pgrid, recover)


@dataclass
class SolveResult:
    u: np.ndarray
    lifted: object  # SchrodingerisedSystem
    pgrid: PGrid
    p_star: Optional[float]
    w0_norm: float
    w_norm: float
    method: str
    growth: tuple  # (min, max) eigenvalue of the Hermitian part


# extra room to the right of the recovery point before the periodic wrap
WRAP_MARGIN = 6.0


def source_scale(sys, t_final, samples=5):
    """Homogenization scale ``T * max_t |b(t)|_2 / 2`` (at least 1).

    The source column then adds at most about ``1/T`` to the spectrum of the
    Hermitian part, so the recovery point stays near ``p = 1.5``.
    """
    if sys.is_homogeneous:
        return 1.0
    times = np.linspace(0.0, t_final, samples) if t_final > 0 else [0.0]
    peak = max(float(np.linalg.norm(sys.source(t))) for t in times)
    return max(1.0, peak * max(t_final, 1.0) / 2)


def growth_range(homog, t_final, samples=3):
    """``(min, max)`` eigenvalue of the Hermitian part of the generator over ``[0, T]``."""
    if homog.source_column is None:
        h1, _ = linalg.hermitian_split(homog.a)
        if linalg.max_norm(h1) == 0:
            return 0.0, 0.0
        return -linalg.max_eigenvalue(-h1), linalg.max_eigenvalue(h1)
    top = sp.csr_matrix(homog.a)[:-1, :-1]
    lo, hi = np.inf, -np.inf
    for t in np.linspace(0.0, t_final, samples):
        h1, _ = linalg.hermitian_split(_bordered(top, homog.source_column(t)))
        lo = min(lo, -linalg.max_eigenvalue(-h1))
        hi = max(hi, linalg.max_eigenvalue(h1))
    return lo, hi


def extend_pgrid(pgrid, right):
    """Same spacing and left end, right end moved to at least ``right``."""
    if pgrid.right >= right:
        return pgrid
    n = int(np.ceil((right - pgrid.left) / pgrid.dp - 1e-9))
    n += n % 2
    return make_pgrid(n, pgrid.left, pgrid.left + n * pgrid.dp)


def schrodingerized_solve(sys, t_final, pgrid=None, recovery=None, plan=None, scale=None,
                          auto_extend=True):
    """Solve ``du/dt = A u + b`` through the lifted Hamiltonian system.

    Exact per-mode exponentials are used when the lifted Hamiltonian is
    constant and ``plan`` does not ask for backward Euler.  Without an explicit
    ``p_star`` the recovery point is the first grid point beyond
    ``max(1, T * lambda_max + 1/2)``.  With ``auto_extend`` the p-domain grows
    to the right (same spacing) until dissipative modes cannot wrap around
    onto the recovery point.
    """
    pgrid = pgrid or make_pgrid()
    recovery = recovery or RecoverySpec()
    plan = plan or EvolutionPlan("exact_expm", t_final)
    homog = sys
    extended = not sys.is_homogeneous
    if extended:
        homog = homogenize(sys, source_scale(sys, t_final) if scale is None else scale)
    lo, hi = growth_range(homog, t_final)
    p_star = None
    if recovery.mode == "pointwise":
        p_star = recovery.p_star
        if p_star is None:
            floor = max(1.0, hi * t_final + 0.5)
            if auto_extend:
                pgrid = extend_pgrid(pgrid, floor + pgrid.dp)
            p_star = default_p_star(pgrid, floor)
        if auto_extend:
            pgrid = extend_pgrid(pgrid, p_star + max(0.0, -lo) * t_final + WRAP_MARGIN)
        recovery = RecoverySpec("pointwise", p_star)
    lifted = build(homog, pgrid)
    w0 = initial_extension(homog.u0, pgrid)
    method = plan.method
    if lifted.is_time_dependent:
        method = "backward_euler"
    if t_final == 0:
        # nothing evolves; skip the lift/recover round trip so the data come back bit-exact
        w = w0
        u = np.array(homog.u0, dtype=complex)
    else:
        if method == "exact_expm":
            w = evolve_exact(lifted, w0, t_final)
        else:
            w = evolve_backward_euler(lifted, w0, t_final, plan.step())
        u = recover(w, pgrid, recovery)
    if extended:
        u = u[:-1]
    return SolveResult(u, lifted, pgrid, p_star, float(np.linalg.norm(w0)),
                       float(np.linalg.norm(w)), method, (lo, hi))


def check_generator(sys, tol=linalg.HERMITIAN_TOL):
    """Raise if the split of ``sys.a`` does not produce Hermitian parts (sanity guard)."""
    h1, h2 = linalg.hermitian_split(sys.a)
    linalg.check_hermitian(h1, tol)
    linalg.check_hermitian(h2, tol)
