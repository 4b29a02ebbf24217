"""Time stepping for lifted systems, plus a direct RK4 reference solver."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import linalg

DEFAULT_BE_STEPS = 2000
_BATCH_BYTES = 256 * 2**20
# below this fill ratio a "dense" block is treated as sparse when factorising
_SPARSE_FILL = 0.05


@dataclass(frozen=True)
class EvolutionPlan:
    method: str = "exact_expm"
    t_final: float = 1.0
    dt: Optional[float] = None

    def __post_init__(self):
        if self.method not in ("exact_expm", "backward_euler"):
            raise ValueError(f"unknown evolution method {self.method!r}")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")

    def step(self):
        return self.dt if self.dt is not None else self.t_final / DEFAULT_BE_STEPS


def _is_pow2(n):
    return n > 0 and n & (n - 1) == 0


def to_p_modes(w, pgrid):
    """``(n, N)`` samples in p -> ``(n, N)`` p-Fourier coefficients."""
    length = pgrid.right - pgrid.left
    if _is_pow2(pgrid.n):
        return linalg.to_fourier(w, length, origin=pgrid.left, axis=1)
    phi, _ = linalg.fourier_basis(pgrid.n, length, origin=pgrid.left)
    return w @ phi.conj() / pgrid.n


def from_p_modes(v, pgrid):
    length = pgrid.right - pgrid.left
    if _is_pow2(pgrid.n):
        return linalg.from_fourier(v, length, origin=pgrid.left, axis=1)
    phi, _ = linalg.fourier_basis(pgrid.n, length, origin=pgrid.left)
    return v @ phi.T


def _is_zero(a):
    return linalg.max_norm(a) == 0.0


def evolve_exact(s, w0, t):
    """Apply ``exp(-i H_k t)`` to every p-mode of ``w0`` and return the p-samples."""
    if s.is_time_dependent:
        raise ValueError("evolve_exact needs a time-independent system; use backward Euler")
    n, n_p = s.n, s.pgrid.n
    v = to_p_modes(np.asarray(w0, dtype=complex).reshape(n, n_p), s.pgrid)
    if t != 0:
        if _is_zero(s.h1):
            # every mode shares -h2, so one propagator handles all columns
            v = linalg.HermitianPropagator(-s.h2).apply(v, t)
        elif not sp.issparse(s.h1) and not sp.issparse(s.h2):
            # batch the per-mode eigensolves, bounding memory to ~_BATCH_BYTES
            n_h = s.h1.shape[0]
            step = max(1, int(_BATCH_BYTES // (16 * n_h * n_h)))
            freqs = s.pgrid.freqs
            out = np.empty_like(v)
            for k0 in range(0, n_p, step):
                ks = slice(k0, min(n_p, k0 + step))
                h = freqs[ks, None, None] * s.h1[None] - s.h2[None]
                lam, vec = np.linalg.eigh(h)
                coef = np.einsum("kji,jk->ki", vec.conj(), v[:, ks]) * np.exp(-1j * lam * t)
                out[:, ks] = np.einsum("kij,kj->ik", vec, coef)
            v = out
        else:
            out = np.empty_like(v)
            for k, h in enumerate(s.mode_hamiltonians):
                out[:, k] = linalg.HermitianPropagator(h, check=False).apply(v[:, k], t)
            v = out
    return from_p_modes(v, s.pgrid).ravel()


def _as_sparse(a):
    if sp.issparse(a):
        return sp.csr_matrix(a, dtype=complex)
    return sp.csr_matrix(np.asarray(a, dtype=complex))


class _ModeSolver:
    """Factorised ``I + i dt (nu_k h1 - h2)`` for all modes at once (mode-major)."""

    def __init__(self, h1, h2, freqs, dt):
        self.n, self.n_p = h1.shape[0], len(freqs)
        dense = not sp.issparse(h1) and not sp.issparse(h2)
        fill = max(np.count_nonzero(linalg.to_dense(h1)), np.count_nonzero(linalg.to_dense(h2))) \
            if dense else 0
        self._lu = None
        if dense and fill > _SPARSE_FILL * self.n ** 2:
            eye = np.eye(self.n)
            self._lu = [sla.lu_factor(eye + 1j * dt * (nu * h1 - h2)) for nu in freqs]
            return
        g = sp.identity(self.n * self.n_p, dtype=complex, format="csc") + 1j * dt * (
            sp.kron(sp.diags(freqs), _as_sparse(h1)) - sp.kron(sp.identity(self.n_p), _as_sparse(h2)))
        self._splu = spla.splu(sp.csc_matrix(g))

    def solve(self, rhs):
        """``rhs`` has shape ``(N, n)`` or ``(N, n, k)``."""
        if self._lu is not None:
            return np.stack([sla.lu_solve(lu, r) for lu, r in zip(self._lu, rhs)])
        flat = rhs.reshape(self.n_p * self.n, -1)
        return self._splu.solve(np.ascontiguousarray(flat)).reshape(rhs.shape)


def evolve_backward_euler(s, w0, t, dt=None):
    """Backward Euler per p-mode: ``(1 + i dt H_k(t_{m+1})) v^{m+1} = v^m``.

    A time-dependent last column (from a homogenized source) is handled by a
    bordered solve, so the factorisation of the constant block is reused.
    """
    n, n_p = s.n, s.pgrid.n
    v = to_p_modes(np.asarray(w0, dtype=complex).reshape(n, n_p), s.pgrid)
    if t == 0:
        return from_p_modes(v, s.pgrid).ravel()
    dt = t / DEFAULT_BE_STEPS if dt is None else float(dt)
    steps = max(1, int(round(t / dt)))
    dt = t / steps
    freqs = s.pgrid.freqs
    x = np.ascontiguousarray(v.T)  # (N, n) mode-major
    if not s.is_time_dependent:
        solver = _ModeSolver(s.h1, s.h2, freqs, dt)
        for _ in range(steps):
            x = solver.solve(x)
        if not np.all(np.isfinite(x)):
            raise FloatingPointError("backward Euler produced non-finite values")
        return from_p_modes(x.T, s.pgrid).ravel()

    h1a, h2a = linalg.hermitian_split(s.a_top)
    solver = _ModeSolver(h1a, h2a, freqs, dt)
    beta = (freqs + 1j) / 2
    for m in range(steps):
        c = np.asarray(s.column((m + 1) * dt), dtype=complex)
        f, g = x[:, :-1], x[:, -1]
        rhs = np.stack([f, np.broadcast_to(c, f.shape)], axis=-1)
        sol = solver.solve(rhs)
        xf, zf = sol[..., 0], sol[..., 1]
        cx = xf @ c.conj()
        cz = zf @ c.conj()
        r = (g - 1j * dt * beta.conj() * cx) / (1 + dt ** 2 * np.abs(beta) ** 2 * cz)
        y = xf - (1j * dt * beta * r)[:, None] * zf
        x = np.concatenate([y, r[:, None]], axis=1)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("backward Euler produced non-finite values")
    return from_p_modes(x.T, s.pgrid).ravel()


def backward_euler_step(h, v, dt):
    """One implicit step for a single Hermitian mode Hamiltonian."""
    h = linalg.to_dense(h)
    g = np.eye(h.shape[0]) + 1j * dt * h
    try:
        return sla.solve(g, v)
    except sla.LinAlgError as exc:
        raise FloatingPointError(f"singular backward Euler system: {exc}") from None


def reference_solve(sys, t, dt=None, max_steps=10_000_000):
    """Classic RK4 on ``du/dt = A u + b(t)`` (no lifting)."""
    a = sys.a
    norm = linalg.max_norm(a)
    limit = 1e-3 if norm == 0 else min(1e-3, 0.1 / norm)
    dt = limit if dt is None else min(dt, limit)
    steps = int(np.ceil(t / dt - 1e-9)) if t > 0 else 0
    if steps > max_steps:
        raise FloatingPointError(f"reference_solve would need {steps} steps (|A|_max={norm:.3e})")
    u = np.asarray(sys.u0, dtype=complex).copy()
    if steps == 0:
        return u
    h = t / steps
    if sys.source_column is not None:
        top = sp.csr_matrix(a)[:-1, :-1]
        col = sys.source_column

        def rhs(tt, y):
            out = np.zeros_like(y)
            out[:-1] = top @ y[:-1] + col(tt) * y[-1]
            return out
    else:
        amat = a if sp.issparse(a) else np.asarray(a)
        has_src = sys.time_dependent_source is not None or np.any(sys.b)

        def rhs(tt, y):
            out = amat @ y
            return out + sys.source(tt) if has_src else out

    tt = 0.0
    for _ in range(steps):
        k1 = rhs(tt, u)
        k2 = rhs(tt + h / 2, u + h / 2 * k1)
        k3 = rhs(tt + h / 2, u + h / 2 * k2)
        k4 = rhs(tt + h, u + h * k3)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        tt += h
    return u
