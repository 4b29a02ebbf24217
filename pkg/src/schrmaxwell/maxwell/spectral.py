"""Fourier spectral discretisations of the RS system on periodic grids."""

import numpy as np
import scipy.sparse as sp

from .. import linalg
from ..schrodingerize import LinearSystem
from .grid import FieldState
from .transforms import SIGMA, rs_matrix, rs_source, scaled_fields, sigma8


def axis_frequencies(grid, d):
    """Centered angular frequencies along axis ``d`` (0 = x)."""
    return linalg.fourier_frequencies(grid.m, grid.lengths[d])


def _freq_diag(grid, d):
    # flattened index has x fastest, so axis d sits at array axis dim-1-d
    nu = axis_frequencies(grid, d)
    shape = [1] * grid.dim
    shape[grid.dim - 1 - d] = grid.m
    return np.broadcast_to(nu.reshape(shape), grid.shape).ravel()


def to_coefficients(values, grid):
    """Apply ``Phi^{-1}`` on every spatial axis of ``(k, *grid.shape)`` data."""
    out = np.asarray(values, dtype=complex)
    for d in range(grid.dim):
        out = linalg.to_fourier(out, grid.lengths[d], origin=grid.origin[d], axis=out.ndim - 1 - d)
    return out


def from_coefficients(coef, grid):
    out = np.asarray(coef, dtype=complex)
    for d in range(grid.dim):
        out = linalg.from_fourier(out, grid.lengths[d], origin=grid.origin[d], axis=out.ndim - 1 - d)
    return out


def sample_rs(grid, medium, fields, t=0.0):
    """Sample ``fields(t, *coords) -> (ex, ey, ez, bx, by, bz)`` into RS form ``(8, *shape)``."""
    coords = grid.mesh()
    vals = [np.broadcast_to(np.asarray(f, dtype=complex), grid.shape) for f in fields(t, *coords)]
    e = np.stack(vals[:3]).reshape(3, -1)
    b = np.stack(vals[3:]).reshape(3, -1)
    return (rs_matrix() @ scaled_fields(e, b, medium)).reshape((8,) + grid.shape)


def sample_rs_source(grid, medium, source, t):
    """Sample ``source(t, *coords) -> (jx, jy, jz, rho)`` into the RS source ``(8, *shape)``."""
    coords = grid.mesh()
    vals = [np.broadcast_to(np.asarray(f, dtype=complex), grid.shape) for f in source(t, *coords)]
    j = np.stack(vals[:3]).reshape(3, -1)
    return rs_source(j, vals[3].ravel(), medium).reshape((8,) + grid.shape)


def spectral_generator(grid, v):
    """``-i v sum_d blockdiag(Sigma_d, Sigma_d^*) (x) D_d`` on Fourier coefficients."""
    n = grid.size
    q = sp.csr_matrix((8 * n, 8 * n), dtype=complex)
    for d in range(grid.dim):
        q = q + sp.kron(sigma8(d), sp.diags(_freq_diag(grid, d)), format="csr")
    return linalg.store(-1j * v * q)


def build_spectral_periodic(grid, medium, source=None, initial=None):
    """Constant-medium RS system acting on the Fourier coefficients ``c``.

    ``initial(t, *coords)`` returns the six field components; ``source(t,
    *coords)`` returns ``(jx, jy, jz, rho)``.  Axes beyond ``grid.dim`` are
    absent and contribute only their zero-frequency mode.
    """
    if not medium.is_constant:
        raise ValueError("build_spectral_periodic needs a constant medium; "
                         "use build_spectral_inhomogeneous")
    _, _, v = medium.scalar()
    a = spectral_generator(grid, v)
    n = 8 * grid.size
    u0 = np.zeros(n, dtype=complex)
    if initial is not None:
        u0 = to_coefficients(sample_rs(grid, medium, initial), grid).ravel()
    b = np.zeros(n, dtype=complex)
    src = None
    if source is not None:
        def src(t):
            return -to_coefficients(sample_rs_source(grid, medium, source, t), grid).ravel()
        b = src(0.0)
    return LinearSystem(a, b, u0, time_dependent_source=src)


def coefficients_to_state(c, grid):
    """Fourier coefficients back to the physical RS state."""
    psi = from_coefficients(np.asarray(c).reshape((8,) + grid.shape), grid)
    return FieldState("rs8", psi.ravel(), grid)


def derivative_matrix(m, length):
    """Real-space spectral derivative ``Phi diag(i nu) Phi^{-1}`` (dense)."""
    phi, nu = linalg.fourier_basis(m, length)
    return (phi * (1j * nu)) @ phi.conj().T / m


def _grid_derivative(grid, d):
    dm = derivative_matrix(grid.m, grid.lengths[d])
    mats = [np.eye(grid.m)] * grid.dim
    mats[grid.dim - 1 - d] = dm
    out = mats[0]
    for mat in mats[1:]:
        out = np.kron(out, mat)
    return out


def gradient_blocks(d):
    """8x8 factors multiplying the gradients of ``eps_bar + mu_bar`` and ``eps_bar - mu_bar``.

    Derived from ``T [[0, -C(grad mu_bar)], [C(grad eps_bar), 0]] T^dag``.
    """
    s, s2 = SIGMA[d], SIGMA[1]
    plus = np.zeros((8, 8), dtype=complex)
    plus[:4, :4] = np.kron(np.eye(2), s)
    plus[4:, 4:] = np.kron(np.eye(2), s.conj())
    minus = np.zeros((8, 8), dtype=complex)
    minus[:4, 4:] = np.kron(s2, s @ s2)
    minus[4:, :4] = np.kron(s2, s.conj() @ s2)
    return 0.5 * plus, 0.5 * minus


def build_spectral_inhomogeneous(grid, medium, source=None, initial=None, form="skew"):
    """RS system in physical space for smooth ``eps(x)``, ``mu(x)`` sampled on ``grid``.

    Generator: ``-sum_d S_d (x) D_d + sum_d [G+_d (x) diag(v * P_d(eps_bar + mu_bar))
    + G-_d (x) diag(v * P_d(eps_bar - mu_bar))]`` with ``P_d`` the dense spectral
    derivative.

    ``form="printed"`` uses ``D_d = diag(v) P_d``.  Its Hermitian part is
    ``-S_d (x) [diag(v), P_d] / 2``, whose norm grows like ``M |v'|`` because
    of grid-scale aliasing.  ``form="skew"`` (default) uses the split
    ``D_d = (diag(v) P_d + P_d diag(v))/2 - diag(P_d v)/2``, equal to the
    printed operator on resolved fields but anti-Hermitian up to a bounded
    diagonal.
    """
    if form not in ("skew", "printed"):
        raise ValueError(f"form must be 'skew' or 'printed', got {form!r}")
    n = grid.size
    eps = np.broadcast_to(medium.eps, (n,)) if medium.eps.size in (1, n) else None
    if eps is None:
        raise ValueError("medium must be sampled on the grid points")
    mu = np.broadcast_to(medium.mu, (n,))
    v = 1.0 / np.sqrt(eps * mu)
    eb, mb = np.log(eps) / 2, np.log(mu) / 2
    a = np.zeros((8 * n, 8 * n), dtype=complex)
    for d in range(grid.dim):
        p = _grid_derivative(grid, d)
        if form == "printed":
            dv = v[:, None] * p
        else:
            dv = 0.5 * (v[:, None] * p + p * v[None, :]) - 0.5 * np.diag(p @ v)
        a -= np.kron(sigma8(d), dv)
        gp, gm = gradient_blocks(d)
        a += np.kron(gp, np.diag(v * (p @ (eb + mb))))
        a += np.kron(gm, np.diag(v * (p @ (eb - mb))))
    u0 = np.zeros(8 * n, dtype=complex)
    if initial is not None:
        u0 = sample_rs(grid, medium, initial).ravel()
    b = np.zeros(8 * n, dtype=complex)
    src = None
    if source is not None:
        def src(t):
            return -sample_rs_source(grid, medium, source, t).ravel()
        b = src(0.0)
    return LinearSystem(linalg.store(a), b, u0, time_dependent_source=src)


def tanh_permittivity(eps1, eps2, center, beta, periodic=False, length=None, origin=0.0,
                      mirror_fraction=0.9):
    """Smoothed step from ``eps1`` to ``eps2`` at ``center``.

    With ``periodic=True`` a mirrored transition back to ``eps1`` sits at
    ``origin + mirror_fraction * length`` so the profile wraps smoothly.
    Returns a function of ``x``.
    """
    if eps1 <= 0 or eps2 <= 0 or beta <= 0:
        raise ValueError("eps1, eps2 and beta must be positive")
    if periodic and length is None:
        raise ValueError("periodic profile needs the domain length")

    def profile(x):
        x = np.asarray(x, dtype=float)
        if not periodic:
            return (eps1 + eps2) / 2 - (eps1 - eps2) / 2 * np.tanh(beta * (x - center))
        back = origin + mirror_fraction * length
        up = 0.5 * (1 + np.tanh(beta * (x - center)))
        down = 0.5 * (1 - np.tanh(beta * (x - back)))
        return eps1 + (eps2 - eps1) * up * down

    return profile
