"""Turn a :class:`ScenarioConfig` into a linear system plus its post-processing."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .. import diagnostics as dg
from ..maxwell import spectral, upwind, yee
from ..maxwell.grid import BoundarySpec, FieldState, GridSpec, InterfaceSpec, MediumParams
from ..maxwell.transforms import rs_unpack
from ..schrodingerize import LinearSystem


@dataclass
class Scenario:
    system: LinearSystem
    grid: GridSpec
    # u -> (field state for energy/err, dict of sample points per component)
    fields: Callable
    exact: Optional[Callable]  # t -> field state with the layout of ``fields``
    extras: Callable  # (u, t) -> dict of scheme-specific diagnostics


def make_grid(cfg):
    g = cfg.grid
    origin = g.origin
    if cfg.exact == "fresnel":
        # put the interface on a node: shift the left end onto the lattice through it
        length = g.lengths[0]
        dx = length / g.m
        ic = cfg.interface
        left = ic.position - round((ic.position - (origin or [-9.0])[0]) / dx) * dx
        origin = [left]
    return GridSpec(g.dim, g.m, tuple(g.lengths), None if origin is None else tuple(origin))


def _exact_te(cfg):
    if cfg.exact == "pec_1d":
        return dg.exact_pec_1d, dg.pec_1d_source
    if cfg.exact == "pec_1d_printed":
        return (lambda t, x: dg.exact_pec_1d(t, x, "printed"),
                lambda t, x: dg.pec_1d_source(t, x, "printed"))
    return dg.exact_impedance_1d, dg.impedance_1d_source


def _medium(cfg, grid):
    m = cfg.medium
    if m.profile == "constant":
        return MediumParams.constant(m.eps, m.mu)
    prof = spectral.tanh_permittivity(m.eps, m.eps2, m.center, m.beta, periodic=True,
                                      length=grid.lengths[0], origin=grid.origin[0],
                                      mirror_fraction=m.mirror_fraction)
    return MediumParams(prof(grid.mesh()[0]).ravel(), np.full(grid.size, m.mu))


def gaussian_pulse(t, x, *rest):
    """Right-moving pulse ``Ey = Bz = 0.01 exp(-20 (x-3)^2 / 100)`` at ``t = 0``."""
    g = 0.01 * np.exp(-20 * (np.asarray(x) - 3) ** 2 / 100)
    zero = np.zeros_like(g)
    return zero, g, zero, zero, zero, g


def _stack_state(layout, comps, grid, points=None):
    data = np.concatenate([np.ravel(c) for c in comps]).astype(complex)
    return FieldState(layout, data, grid, points)


def build_scenario(cfg):
    grid = make_grid(cfg)
    bc = BoundarySpec(cfg.boundary.left, cfg.boundary.right)
    builder = _BUILDERS[cfg.scheme]
    return builder(cfg, grid, bc)


def _schr1(cfg, grid, bc):
    med = _medium(cfg, grid)
    sys = spectral.build_spectral_periodic(grid, med, initial=dg.tm_2d_fields)
    coords = grid.mesh()
    pts = np.stack(coords, axis=-1).reshape(-1, grid.dim)

    def fields(u):
        psi = spectral.coefficients_to_state(u, grid)
        e, b = rs_unpack(psi, med)
        return _stack_state("eb", [*e, *b], grid, [pts] * 6)

    def exact(t):
        vals = [np.broadcast_to(c, grid.shape) for c in dg.tm_2d_fields(t, *coords)]
        return _stack_state("eb", vals, grid, [pts] * 6)

    def extras(u, t):
        f4, f8 = dg.gauss_monitors(spectral.coefficients_to_state(u, grid))
        return {"gauss_f4": f4, "gauss_f8": f8}

    return Scenario(sys, grid, fields, exact, extras)


def _schr2(cfg, grid, bc):
    med = _medium(cfg, grid)
    sys = yee.build_yee_periodic(grid, med, initial=dg.tm_2d_fields, polarization="tm")
    div0 = yee.discrete_div(yee.yee_state(sys.u0, grid, "tm"))

    def fields(u):
        return yee.yee_state(u, grid, "tm")

    def exact(t):
        return yee.yee_state(yee.sample_fields(grid, dg.tm_2d_fields, t, yee.TM_COMPONENTS),
                             grid, "tm")

    def extras(u, t):
        div = yee.discrete_div(yee.yee_state(u, grid, "tm"))
        return {"div_b_drift": float(np.max(np.abs(div - div0)))}

    return Scenario(sys, grid, fields, exact, extras)


def _te_yee(cfg, grid, bc):
    med = _medium(cfg, grid)
    ex, src = _exact_te(cfg)
    sys = yee.build_yee_1d(grid, med, bc, source=src, initial=dg.te_fields(ex))
    xh, xn, _ = yee.te1d_points(grid)

    def fields(u):
        return yee.te1d_state(u, grid)

    def exact(t):
        return _stack_state("te1d", [ex(t, xh)[0], ex(t, xn)[1], ex(t, xh)[2]], grid,
                            [xh[:, None], xn[:, None], xh[:, None]])

    return Scenario(sys, grid, fields, exact, lambda u, t: {})


def _nodal_state(u, grid, medium, mask=None):
    x, e, b = upwind.nodal_fields(u, grid, medium)
    keep = slice(None) if mask is None else mask
    pts = x[keep][:, None]
    return _stack_state("te1d", [e[0][keep], e[1][keep], b[2][keep]], grid, [pts] * 3)


def _te_upwind(cfg, grid, bc):
    med = _medium(cfg, grid)
    ex, src = _exact_te(cfg)
    sys = upwind.build_upwind_1d(grid, med, bc, source=src, initial=dg.te_fields(ex))
    x = upwind.char_points(grid)[1][1:]

    def fields(u):
        return _nodal_state(u, grid, med)

    def exact(t):
        ex_, ey, bz = ex(t, x)
        return _stack_state("te1d", [ex_, ey, bz], grid, [x[:, None]] * 3)

    return Scenario(sys, grid, fields, exact, lambda u, t: {})


def _interface(cfg, grid, bc):
    ic = cfg.interface
    setup = dg.FresnelSetup(ic.eps1, ic.mu1, ic.eps2, ic.mu2, ic.omega, ic.position)
    spec = InterfaceSpec(ic.position, ic.eps1, ic.mu1, ic.eps2, ic.mu2)
    exact_fields = dg.interface_fields(setup)
    sys = upwind.build_interface_1d(grid, spec, bc, initial=exact_fields, exact=exact_fields)
    side_even, side_odd = upwind.interface_sides(grid, ic.position)
    eps = np.array([ic.eps1, ic.eps2])
    mu = np.array([ic.mu1, ic.mu2])
    med_odd = MediumParams(eps[side_odd], mu[side_odd])
    x = upwind.char_points(grid)[1][1:]
    # the interface node mixes traces from both sides; leave it out of pointwise errors
    mask = np.abs(x - ic.position) > 1e-9 * grid.dx[0]

    def fields(u):
        return _fields_interface(u, grid, med_odd, mask)

    def exact(t):
        ey, bz = dg.exact_interface(t, x[mask], setup)
        zero = np.zeros_like(ey)
        return _stack_state("te1d", [zero, ey, bz], grid, [x[mask][:, None]] * 3)

    def extras(u, t):
        st = _fields_interface(u, grid, med_odd, mask)
        return {"fresnel": fresnel_fit(x[mask], st.component("Ey"), t, setup, ic.fit_distance)}

    return Scenario(sys, grid, fields, exact, extras)


def _fields_interface(u, grid, med_odd, mask):
    # nodal values use odd-family media; the even family shares them away from the interface
    return _nodal_state(u, grid, med_odd, mask)


def fresnel_fit(x, ey, t, setup, distance=2.0):
    """Least-squares incident/reflected/transmitted amplitudes from ``Ey`` samples.

    Left of ``position - distance`` the model is ``a e^{i(wt - k1 x)} + r e^{i(wt + k1 x)}``;
    right of ``position + distance`` it is ``tr e^{i(wt - k2 x)}``.  Amplitudes are
    reported relative to the fitted incident amplitude.
    """
    k1, k2 = setup.wavenumbers
    xi = x - setup.position
    left = xi <= -distance
    right = xi >= distance
    w = setup.omega * t
    basis = np.stack([np.exp(1j * (w - k1 * xi[left])), np.exp(1j * (w + k1 * xi[left]))], axis=1)
    (a, r), *_ = np.linalg.lstsq(basis, ey[left], rcond=None)
    tr = np.linalg.lstsq(np.exp(1j * (w - k2 * xi[right]))[:, None], ey[right], rcond=None)[0][0]
    refl, trans = setup.reflection, setup.transmission
    return {
        "incident": [float(a.real), float(a.imag)],
        "reflected": [float((r / a).real), float((r / a).imag)],
        "transmitted": [float((tr / a).real), float((tr / a).imag)],
        "reflection_expected": refl,
        "transmission_expected": trans,
        "reflection_error": float(abs(r / a - refl)),
        "transmission_rel_error": float(abs(tr / a - trans) / abs(trans)),
    }


def _inhomogeneous(cfg, grid, bc):
    med = _medium(cfg, grid)
    sys = spectral.build_spectral_inhomogeneous(grid, med, initial=gaussian_pulse)
    pts = grid.mesh()[0].reshape(-1, 1)

    def fields(u):
        return FieldState("rs8", np.asarray(u), grid, [pts] * 8)

    def extras(u, t):
        f4, f8 = dg.gauss_monitors(FieldState("rs8", np.asarray(u), grid))
        return {"gauss_f4": f4, "gauss_f8": f8}

    return Scenario(sys, grid, fields, None, extras)


_BUILDERS = {
    "schr1_spectral": _schr1,
    "schr2_yee": _schr2,
    "yee_1d": _te_yee,
    "upwind_char": _te_upwind,
    "interface_1d": _interface,
    "spectral_inhomogeneous": _inhomogeneous,
}
