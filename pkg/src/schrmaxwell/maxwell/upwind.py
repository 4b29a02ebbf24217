"""First-order upwind scheme for the 1-D characteristic form of the RS system.

The characteristic variables ``chi = (1 (x) U) Psi`` split into right-moving
components (0-based even indices, sampled at ``x0 + (j+1) dx``) and
left-moving ones (odd indices, sampled at ``x0 + j dx``).  Each component is
differenced against the wind; the missing inflow value at either end comes
from a ghost coupling: a 4x4 matrix mapping the outgoing traces to the
incoming ones.
"""

import numpy as np
import scipy.sparse as sp

from .. import linalg
from ..schrodingerize import LinearSystem
from .grid import FieldState, InterfaceSpec, MediumParams
from .transforms import build_transforms, rs_source, scaled_fields
from .yee import d_left, d_right

EVEN = (0, 2, 4, 6)
ODD = (1, 3, 5, 7)
COUPLING_KINDS = ("pec_left", "impedance_right", "pec_right", "impedance_left")


def printed_boundary_coupling(kind, v=1.0):
    """Ghost coupling matrices in their published ``1/(2 sqrt 2)`` normalisation."""
    w = (v - 1) / (v + 1)
    if kind == "pec_left":
        m = [[1, 1, 1, -1], [-1, -1, 1, -1], [1, -1, 1, 1], [1, -1, -1, -1]]
    elif kind == "impedance_right":
        m = [[1, -1, -w, -w], [1, -1, w, w], [-w, -w, 1, -1], [w, w, 1, -1]]
    elif kind == "pec_right":
        m = [[1, -1, 1, 1], [1, -1, -1, -1], [1, 1, 1, -1], [-1, -1, 1, -1]]
    elif kind == "impedance_left":
        m = [[1, 1, -w, w], [-1, -1, -w, w], [-w, w, 1, 1], [-w, w, -1, -1]]
    else:
        raise ValueError(f"unknown coupling kind {kind!r}; expected one of {COUPLING_KINDS}")
    return np.array(m, dtype=complex) / (2 * np.sqrt(2))


def boundary_coupling(kind, v=1.0):
    """Same as :func:`printed_boundary_coupling`; kept as the public name."""
    return printed_boundary_coupling(kind, v)


def ghost_coupling(kind, v=1.0):
    """Coupling actually reproducing the wall condition: ``sqrt 2`` times the printed one.

    With this scale the ghost traces satisfy the boundary condition exactly.
    The conductor couplings are orthogonal; the impedance ones are
    contractions (a projection at ``v = 1``).
    """
    return np.sqrt(2) * printed_boundary_coupling(kind, v)


def char_points(grid):
    """``(even_points, odd_points)`` of a 1-D grid."""
    x0, dx = grid.origin[0], grid.dx[0]
    j = np.arange(grid.m)
    return x0 + (j + 1) * dx, x0 + j * dx


def char_matrix():
    """``(1 (x) U) T``: scaled 8-vector to characteristic variables."""
    tm = build_transforms()
    return tm.u_char @ tm.t_rs


def to_characteristic(e, b, medium):
    """Physical ``E``, ``B`` of shape ``(3, n)`` -> ``chi`` of shape ``(8, n)``."""
    return char_matrix() @ scaled_fields(e, b, medium)


def from_characteristic(chi, medium):
    """Inverse of :func:`to_characteristic`; returns ``(E, B)``."""
    f = char_matrix().conj().T @ np.asarray(chi)
    eps, mu = np.broadcast_to(medium.eps, f.shape[1:]), np.broadcast_to(medium.mu, f.shape[1:])
    return np.sqrt(2) * f[0:3] / np.sqrt(eps), np.sqrt(2) * f[4:7] * np.sqrt(mu)


def _fields_eb(fields, t, x):
    vals = [np.broadcast_to(np.asarray(f, dtype=complex), x.shape) for f in fields(t, x)]
    return np.stack(vals[:3]), np.stack(vals[3:])


def sample_characteristic(fields, t, grid, medium_even, medium_odd):
    """Sample ``fields(t, x) -> (ex, ey, ez, bx, by, bz)`` on the staggered points."""
    xe, xo = char_points(grid)
    ce = to_characteristic(*_fields_eb(fields, t, xe), medium_even)
    co = to_characteristic(*_fields_eb(fields, t, xo), medium_odd)
    out = np.empty((8, grid.m), dtype=complex)
    out[list(EVEN)] = ce[list(EVEN)]
    out[list(ODD)] = co[list(ODD)]
    return out


def sample_char_source(source, t, grid, medium_even, medium_odd):
    """``(1 (x) U) T J`` on the staggered points; ``source(t, x) -> (jx, jy, jz, rho)``."""
    xe, xo = char_points(grid)
    u = build_transforms().u_char
    out = np.empty((8, grid.m), dtype=complex)
    for pts, med, idx in ((xe, medium_even, EVEN), (xo, medium_odd, ODD)):
        vals = [np.broadcast_to(np.asarray(f, dtype=complex), pts.shape) for f in source(t, pts)]
        out[list(idx)] = (u @ rs_source(np.stack(vals[:3]), vals[3], med))[list(idx)]
    return out


def _rows(k, m):
    """``(first, last)`` global rows of component ``k``."""
    return k * m, (k + 1) * m - 1


def _core(m, dx, v_rows, cut=None):
    """Interior upwind stencils; ``cut`` removes the coupling across row ``cut``."""
    dl, dr = d_left(m, dx).tolil(), d_right(m, dx).tolil()
    if cut is not None:
        dl[cut, cut - 1] = 0
        dr[cut - 1, cut] = 0
    vd = sp.diags(v_rows)
    blocks = [-vd @ dl.tocsr() if k % 2 == 0 else vd @ dr.tocsr() for k in range(8)]
    return sp.block_diag(blocks, format="lil").astype(complex)


def _install_walls(a, m, dx, bc, v_left, v_right, printed_scale):
    scale = printed_boundary_coupling if printed_scale else ghost_coupling
    if bc.left == "periodic":
        for k in EVEN:
            a[_rows(k, m)[0], _rows(k, m)[1]] += v_left / dx
        for k in ODD:
            a[_rows(k, m)[1], _rows(k, m)[0]] += v_right / dx
        return
    left = {"perfect_conductor": "pec_left", "impedance": "impedance_left"}.get(bc.left)
    right = {"perfect_conductor": "pec_right", "impedance": "impedance_right"}.get(bc.right)
    if left is not None:
        c = scale(left, v_left)
        for i, ki in enumerate(EVEN):
            for j, kj in enumerate(ODD):
                a[_rows(ki, m)[0], _rows(kj, m)[0]] += v_left / dx * c[i, j]
    if right is not None:
        c = scale(right, v_right)
        for i, ki in enumerate(ODD):
            for j, kj in enumerate(EVEN):
                a[_rows(ki, m)[1], _rows(kj, m)[1]] += v_right / dx * c[i, j]


def _inflow(bc, grid, exact, v_left, v_right, med_left, med_right):
    """Source contribution of analytic inflow at ``inflow_exact`` walls."""
    if exact is None:
        if "inflow_exact" in (bc.left, bc.right):
            raise ValueError("inflow_exact boundaries need an exact solution")
        return None
    m, dx = grid.m, grid.dx[0]
    x0, x1 = grid.origin[0], grid.origin[0] + grid.lengths[0]

    def add(t, out):
        if bc.left == "inflow_exact":
            chi = to_characteristic(*_fields_eb(exact, t, np.array([x0])), med_left)[:, 0]
            for k in EVEN:
                out[_rows(k, m)[0]] += v_left / dx * chi[k]
        if bc.right == "inflow_exact":
            chi = to_characteristic(*_fields_eb(exact, t, np.array([x1])), med_right)[:, 0]
            for k in ODD:
                out[_rows(k, m)[1]] += v_right / dx * chi[k]
        return out
    return add


def build_upwind_1d(grid, medium, bc, source=None, initial=None, exact=None,
                    printed_scale=False):
    """Upwind characteristic system on an 8-component, component-major layout.

    ``bc.left``/``bc.right`` select periodic wrap, a perfect conductor, an
    impedance wall or analytic inflow (``exact(t, x)`` then supplies the
    incoming traces).  ``printed_scale=True`` installs the couplings with the
    published normalisation instead of the wall-exact one.
    """
    if grid.dim != 1:
        raise ValueError("build_upwind_1d needs a 1-D grid")
    if not medium.is_constant:
        raise ValueError("build_upwind_1d needs a constant medium")
    _, _, v = medium.scalar()
    m, dx = grid.m, grid.dx[0]
    a = _core(m, dx, np.full(m, v))
    _install_walls(a, m, dx, bc, v, v, printed_scale)
    inflow = _inflow(bc, grid, exact, v, v, medium, medium)
    return _finish(a, grid, medium, medium, source, initial, inflow)


def _finish(a, grid, med_even, med_odd, source, initial, inflow):
    a = linalg.store(a.tocsr())
    n = a.shape[0]
    u0 = np.zeros(n, dtype=complex)
    if initial is not None:
        u0 = sample_characteristic(initial, 0.0, grid, med_even, med_odd).ravel()
    src = None
    b = np.zeros(n, dtype=complex)
    if source is not None or inflow is not None:
        def src(t):
            out = np.zeros(n, dtype=complex)
            if source is not None:
                out -= sample_char_source(source, t, grid, med_even, med_odd).ravel()
            if inflow is not None:
                inflow(t, out)
            return out
        b = src(0.0)
    return LinearSystem(a, b, u0, time_dependent_source=src)


def char_state(u, grid):
    xe, xo = char_points(grid)
    pts = [(xe if k % 2 == 0 else xo)[:, None] for k in range(8)]
    return FieldState("te1d_char", np.asarray(u), grid, pts)


def nodal_fields(u, grid, medium):
    """``(x, E, B)`` on the interior nodes ``x0 + j dx``, ``j = 1..M-1``.

    Both families are sampled there: right-movers at index ``j-1`` and
    left-movers at index ``j``.  A sampled ``medium`` follows the odd
    (left-mover) points.
    """
    chi = np.asarray(u).reshape(8, grid.m)
    node = np.empty((8, grid.m - 1), dtype=complex)
    node[list(EVEN)] = chi[list(EVEN), :-1]
    node[list(ODD)] = chi[list(ODD), 1:]
    x = char_points(grid)[1][1:]
    if medium.eps.size > 1:
        medium = MediumParams(medium.eps[1:], medium.mu[1:])
    e, b = from_characteristic(node, medium)
    return x, e, b


def interface_jump_matrices(spec, transforms=None):
    """``(r1_tilde, r2_tilde)`` acting on characteristic traces of each side.

    ``R_j = blockdiag(R_j^E, R_j^B)`` encodes continuity of the normal ``eps E``
    and ``B`` and of the tangential ``E`` and ``B/mu``; the tilde form is
    ``R_j T^dag (1 (x) U)^dag``.
    """
    n = np.asarray(spec.normal, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-12:
        raise ValueError("interface normal must be a unit 3-vector")
    tm = transforms or build_transforms()
    back = tm.t_rs.conj().T @ tm.u_char.conj().T

    def block(s):
        nx, ny, nz = n
        return np.array([
            [s * nx, s * ny, s * nz, 1],
            [0, -nz / s, ny / s, 1],
            [nz / s, 0, -nx / s, 1],
            [-ny / s, nx / s, 0, 1],
        ], dtype=complex)

    out = []
    for eps, mu in ((spec.eps1, spec.mu1), (spec.eps2, spec.mu2)):
        r = np.zeros((8, 8), dtype=complex)
        r[:4, :4] = block(np.sqrt(eps))
        r[4:, 4:] = block(np.sqrt(mu))
        out.append((r, r @ back))
    return out[0][0], out[1][0], out[0][1], out[1][1]


def with_jump_matrices(spec):
    """Copy of ``spec`` with ``r1``, ``r2``, ``r1_tilde``, ``r2_tilde`` filled in."""
    r1, r2, r1t, r2t = interface_jump_matrices(spec)
    return InterfaceSpec(spec.position, spec.eps1, spec.mu1, spec.eps2, spec.mu2, spec.normal,
                         r1, r2, r1t, r2t)


def interface_transfer(spec):
    """Map ``(right-movers of side 1, left-movers of side 2) -> (left-movers of side 1,
    right-movers of side 2)`` at the interface."""
    _, _, r1t, r2t = interface_jump_matrices(spec)
    ev, od = list(EVEN), list(ODD)
    lhs = np.hstack([r1t[:, od], -r2t[:, ev]])
    rhs = np.hstack([-r1t[:, ev], r2t[:, od]])
    if abs(np.linalg.det(lhs)) < 1e-12:
        raise np.linalg.LinAlgError("interface matching system is singular")
    return np.linalg.solve(lhs, rhs)


def interface_index(grid, position):
    x0, dx = grid.origin[0], grid.dx[0]
    k = int(round((position - x0) / dx))
    if abs(x0 + k * dx - position) > 1e-9 * max(1.0, abs(position)) or not 0 < k < grid.m:
        raise ValueError(f"interface at {position} is not an interior grid node")
    return k


def build_interface_1d(grid, spec, bc, source=None, initial=None, exact=None):
    """Upwind system with a material interface on grid node ``x0 + K dx``.

    Rows ``0..K-1`` of every component belong to the left medium and rows
    ``K..M-1`` to the right.  The stencils across the interface are cut; the
    incoming traces there are obtained from the outgoing ones through
    :func:`interface_transfer`.  ``exact(t, x, side)`` (side 0 left, 1 right)
    provides initial data and inflow at ``inflow_exact`` walls.
    """
    if grid.dim != 1:
        raise ValueError("build_interface_1d needs a 1-D grid")
    if "periodic" in (bc.left, bc.right):
        raise ValueError("build_interface_1d does not support periodic walls")
    m, dx = grid.m, grid.dx[0]
    k = interface_index(grid, spec.position)
    v1 = 1 / np.sqrt(spec.eps1 * spec.mu1)
    v2 = 1 / np.sqrt(spec.eps2 * spec.mu2)
    v_rows = np.where(np.arange(m) < k, v1, v2)
    a = _core(m, dx, v_rows, cut=k)
    s = interface_transfer(spec)
    # knowns: right-mover traces of side 1 (row K-1), left-mover traces of side 2 (row K)
    cols = [_rows(c, m)[0] + k - 1 for c in EVEN] + [_rows(c, m)[0] + k for c in ODD]
    for i, c in enumerate(ODD):
        row = _rows(c, m)[0] + k - 1
        for j, col in enumerate(cols):
            a[row, col] += v1 / dx * s[i, j]
    for i, c in enumerate(EVEN):
        row = _rows(c, m)[0] + k
        for j, col in enumerate(cols):
            a[row, col] += v2 / dx * s[4 + i, j]
    _install_walls(a, m, dx, bc, v1, v2, printed_scale=False)

    side_even, side_odd = interface_sides(grid, spec.position)
    eps = np.array([spec.eps1, spec.eps2])
    mu = np.array([spec.mu1, spec.mu2])
    med_even = MediumParams(eps[side_even], mu[side_even])
    med_odd = MediumParams(eps[side_odd], mu[side_odd])

    walls = None if exact is None else _SidedWalls(exact, grid)
    inflow = _inflow(bc, grid, walls, v1, v2, spec.medium_left, spec.medium_right)
    sys = _finish(a, grid, med_even, med_odd, source, None, inflow)
    if initial is not None:
        u0 = sample_sided(initial, 0.0, grid, side_even, side_odd, med_even, med_odd)
        sys = LinearSystem(sys.a, sys.b, u0, time_dependent_source=sys.time_dependent_source)
    return sys


def interface_sides(grid, position):
    """Side (0 left, 1 right) of every even and odd sample."""
    k = interface_index(grid, position)
    j = np.arange(grid.m)
    return (j + 1 > k).astype(int), (j >= k).astype(int)


class _SidedWalls:
    """Adapter evaluating ``exact(t, x, side)`` with the side of each outer wall."""

    def __init__(self, exact, grid):
        self.exact = exact
        self.x0 = grid.origin[0]

    def __call__(self, t, x):
        side = 0 if np.all(np.asarray(x) <= self.x0) else 1
        return self.exact(t, x, side)


def sample_sided(func, t, grid, side_even, side_odd, med_even, med_odd):
    """Characteristic samples of ``func(t, x, side)`` with a per-point side label."""
    xe, xo = char_points(grid)
    out = np.empty((8, grid.m), dtype=complex)
    for pts, sides, med, idx in ((xe, side_even, med_even, EVEN), (xo, side_odd, med_odd, ODD)):
        e = np.zeros((3, grid.m), dtype=complex)
        b = np.zeros((3, grid.m), dtype=complex)
        for side in (0, 1):
            mask = sides == side
            if mask.any():
                e[:, mask], b[:, mask] = _fields_eb(lambda tt, xx: func(tt, xx, side), t, pts[mask])
        out[list(idx)] = to_characteristic(e, b, med)[list(idx)]
    return out.ravel()
