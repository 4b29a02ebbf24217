"""Yee lattice discretisations: periodic 1/2/3-D and the 1-D TE boundary model.

Staggering follows the dual layout used throughout the package: E components
sit on cell faces and B components on cell edges,

    Ex (0, 1/2, 1/2)   Ey (1/2, 0, 1/2)   Ez (1/2, 1/2, 0)
    Bx (1/2, 0, 0)     By (0, 1/2, 0)     Bz (0, 0, 1/2)

in units of the cell size.  Fields are stored scaled, ``sqrt(eps) E`` and
``B / sqrt(mu)``.
"""

import numpy as np
import scipy.sparse as sp

from .. import linalg
from ..schrodingerize import LinearSystem
from .grid import FieldState

OFFSETS = {
    "Ex": (0.0, 0.5, 0.5), "Ey": (0.5, 0.0, 0.5), "Ez": (0.5, 0.5, 0.0),
    "Bx": (0.5, 0.0, 0.0), "By": (0.0, 0.5, 0.0), "Bz": (0.0, 0.0, 0.5),
}
COMPONENTS = ("Ex", "Ey", "Ez", "Bx", "By", "Bz")
TM_COMPONENTS = ("Ez", "Bx", "By")


def difference_matrices(grid):
    """Forward differences ``(C_x, C_y, C_z)``; absent axes give zero matrices."""
    n = grid.size
    eye = sp.identity(grid.m, format="csr")
    shift = sp.csr_matrix(linalg.shift_matrix(grid.m))
    out = []
    for d in range(3):
        if d >= grid.dim:
            out.append(sp.csr_matrix((n, n)))
            continue
        factors = [eye] * grid.dim
        factors[grid.dim - 1 - d] = shift
        f = factors[0]
        for g in factors[1:]:
            f = sp.kron(f, g, format="csr")
        out.append(((f - sp.identity(n)) / grid.dx[d]).tocsr())
    return tuple(out)


def curl_blocks(grid):
    """``K`` with ``curl_h B = K B`` (at E points) and ``curl_h E = K^T E`` (at B points)."""
    cx, cy, cz = difference_matrices(grid)
    return sp.bmat([[None, -cz, cy], [cz, None, -cx], [-cy, cx, None]], format="csr")


def curl_matrices(grid, v=1.0):
    """``(M_B^E, M_E^B)`` with ``M_E^B = -(M_B^E)^T`` by construction."""
    k = sp.csr_matrix(v * curl_blocks(grid))
    return k, sp.csr_matrix(-k.T)


def sample_fields(grid, fields, t=0.0, names=COMPONENTS, eps=1.0, mu=1.0):
    """Sample ``fields(t, *coords) -> (ex, ey, ez, bx, by, bz)`` at Yee points (scaled)."""
    out = []
    for name in names:
        coords = grid.mesh(OFFSETS[name][:grid.dim])
        val = fields(t, *coords)[COMPONENTS.index(name)]
        scale = np.sqrt(eps) if name[0] == "E" else 1 / np.sqrt(mu)
        out.append(scale * np.broadcast_to(np.asarray(val, dtype=complex), grid.shape).ravel())
    return np.concatenate(out)


def sample_current(grid, source, t, names=("Ex", "Ey", "Ez"), eps=1.0):
    """``J / sqrt(eps)`` at the E points of ``names``."""
    out = []
    for name in names:
        coords = grid.mesh(OFFSETS[name][:grid.dim])
        val = source(t, *coords)["xyz".index(name[1])]
        out.append(np.broadcast_to(np.asarray(val, dtype=complex), grid.shape).ravel() / np.sqrt(eps))
    return np.concatenate(out)


def build_yee_periodic(grid, medium, source=None, initial=None, polarization=None):
    """Periodic Yee system ``d/dt (E, B) = [[0, M_B^E], [M_E^B, 0]] (E, B) - (J, 0)``.

    ``polarization="tm"`` (the default in 2-D) keeps only ``(Ez, Bx, By)``.
    """
    if not medium.is_constant:
        raise ValueError("build_yee_periodic needs a constant medium")
    eps, mu, v = medium.scalar()
    if polarization is None:
        polarization = "tm" if grid.dim == 2 else "full"
    if polarization not in ("tm", "full"):
        raise ValueError(f"unknown polarization {polarization!r}")
    meb, mbe = curl_matrices(grid, v)
    a = sp.bmat([[None, meb], [mbe, None]], format="csr")
    names = COMPONENTS
    if polarization == "tm":
        n = grid.size
        keep = np.concatenate([np.arange(k * n, (k + 1) * n) for k in (2, 3, 4)])
        a = a[keep][:, keep]
        names = TM_COMPONENTS
    a = linalg.store(a)
    dim = a.shape[0]
    u0 = np.zeros(dim, dtype=complex)
    if initial is not None:
        u0 = sample_fields(grid, initial, 0.0, names, eps, mu)
    e_names = tuple(x for x in names if x[0] == "E")
    src = None
    b = np.zeros(dim, dtype=complex)
    if source is not None:
        def src(t):
            out = np.zeros(dim, dtype=complex)
            out[:len(e_names) * grid.size] = -sample_current(grid, source, t, e_names, eps)
            return out
        b = src(0.0)
    return LinearSystem(a, b, u0, time_dependent_source=src)


def yee_state(u, grid, polarization="full"):
    """Wrap a Yee solution vector as a six-component ``yee_eb`` state."""
    n = grid.size
    u = np.asarray(u)
    if polarization == "tm":
        data = np.zeros(6 * n, dtype=u.dtype)
        data[2 * n:5 * n] = u[:3 * n]
    else:
        data = u[:6 * n]
    points = [np.stack(grid.mesh(OFFSETS[c][:grid.dim]), axis=-1).reshape(-1, grid.dim)
              for c in COMPONENTS]
    return FieldState("yee_eb", data, grid, points)


def discrete_curl(state):
    """Curl of the E blocks, evaluated at the B points; returns a ``yee_eb`` state."""
    if state.layout != "yee_eb":
        raise ValueError(f"discrete_curl needs the yee_eb layout, got {state.layout}")
    k = curl_blocks(state.grid)
    e = state.data[:3 * state.grid.size]
    data = np.concatenate([np.zeros_like(e), k.T @ e])
    return FieldState("yee_eb", data, state.grid, state.points)


def discrete_div(state, field="B"):
    """Central-difference divergence of the B blocks (at nodes) or E blocks (at cell centres)."""
    if state.layout != "yee_eb":
        raise ValueError(f"discrete_div needs the yee_eb layout, got {state.layout}")
    n = state.grid.size
    c = difference_matrices(state.grid)
    if field == "B":
        blocks = state.data[3 * n:].reshape(3, n)
        return -sum(ck.T @ x for ck, x in zip(c, blocks))
    if field == "E":
        blocks = state.data[:3 * n].reshape(3, n)
        return sum(ck @ x for ck, x in zip(c, blocks))
    raise ValueError("field must be 'B' or 'E'")


def d_left(m, dx):
    """Backward difference ``(1 - sum |i><i-1|)/dx`` with a zero inflow value."""
    return sp.diags([np.ones(m), -np.ones(m - 1)], [0, -1], format="csr") / dx


def d_right(m, dx):
    """Forward difference ``(-1 + sum |i-1><i|)/dx``; equals ``-d_left(m, dx).T``."""
    return sp.diags([-np.ones(m), np.ones(m - 1)], [0, 1], format="csr") / dx


def te1d_points(grid):
    """Sample points of ``(Ex, Ey, Bz)``: half nodes, whole nodes ``1..M``, half nodes."""
    x0, dx = grid.origin[0], grid.dx[0]
    j = np.arange(grid.m)
    return x0 + (j + 0.5) * dx, x0 + (j + 1.0) * dx, x0 + (j + 0.5) * dx


def build_yee_1d(grid, medium, bc, source=None, initial=None):
    """1-D TE Yee system on ``(Ex at j+1/2, Ey at j+1, Bz at j+1/2)``.

    ``Ey`` at the left node is eliminated: it is zero for a perfect conductor
    and ``-v Bz(0)`` (Bz extrapolated to second order) for an impedance
    wall.  On the right the last ``Ey`` unknown is decoupled for a perfect conductor
    or closed with the ghost value ``Bz(M+1/2) = 2 Ey(M)/v - Bz(M-1/2)`` for an
    impedance wall.  ``source(t, x)`` returns ``(jx, jy, jz, rho)``.
    """
    if grid.dim != 1:
        raise ValueError("build_yee_1d needs a 1-D grid")
    if not medium.is_constant:
        raise ValueError("build_yee_1d needs a constant medium")
    supported = ("perfect_conductor", "impedance")
    if bc.left not in supported or bc.right not in supported:
        raise ValueError(f"build_yee_1d supports {supported}, got {bc.left}/{bc.right}")
    _, _, v = medium.scalar()
    m, dx = grid.m, grid.dx[0]
    a = sp.lil_matrix((3 * m, 3 * m), dtype=complex)
    a[m:2 * m, 2 * m:] = -v * d_right(m, dx)
    a[2 * m:, m:2 * m] = -v * d_left(m, dx)
    if bc.right == "impedance":
        a[2 * m - 1, 2 * m - 1] += -(v / dx) * (2 / v)
        a[2 * m - 1, 3 * m - 1] += (v / dx)
    else:
        # Ey(L) stays zero: drop its row and column so the generator stays skew
        a[2 * m - 1, :] = 0
        a[:, 2 * m - 1] = 0
    if bc.left == "impedance":
        # dBz(1/2)/dt gains (v/dx) Ey(0) with Ey(0) = -v (3 Bz(1/2) - Bz(3/2)) / 2
        a[2 * m, 2 * m] += -(v / dx) * v * 1.5
        a[2 * m, 2 * m + 1] += (v / dx) * v * 0.5
    a = linalg.store(a.tocsr())
    xh, xn, _ = te1d_points(grid)
    u0 = np.zeros(3 * m, dtype=complex)
    if initial is not None:
        ex, ey, bz = initial(0.0, xh), initial(0.0, xn), initial(0.0, xh)
        u0 = np.concatenate([_vals(ex[0], m), _vals(ey[1], m), _vals(bz[5], m)])
    b = np.zeros(3 * m, dtype=complex)
    src = None
    if source is not None:
        freeze = bc.right == "perfect_conductor"

        def src(t):
            out = np.zeros(3 * m, dtype=complex)
            out[:m] = -_vals(source(t, xh)[0], m)
            out[m:2 * m] = -_vals(source(t, xn)[1], m)
            if freeze:
                out[2 * m - 1] = 0
            return out
        b = src(0.0)
    return LinearSystem(a, b, u0, time_dependent_source=src)


def _vals(x, m):
    return np.broadcast_to(np.asarray(x, dtype=complex), (m,)).copy()


def te1d_state(u, grid):
    xh, xn, _ = te1d_points(grid)
    return FieldState("te1d", np.asarray(u), grid, [xh[:, None], xn[:, None], xh[:, None]])
