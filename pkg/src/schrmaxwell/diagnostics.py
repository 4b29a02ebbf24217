"""Exact solutions, conservation monitors, error metrics and cost estimates."""

import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from .maxwell.transforms import GAUSS_SLOTS, rs_matrix

# Published comparison values for the 2-D periodic TM test (None = not reported).
PUBLISHED_REFERENCE = {
    "qla": {"energy_drift": 1.16e-4, "div_b_drift": None, "gauss_f4": 3.71e-3,
            "gauss_f8": 3.72e-3, "err_eb": 1.53e-1},
    "schr1": {"energy_drift": 1.33e-15, "div_b_drift": None, "gauss_f4": 9.72e-16,
              "gauss_f8": 9.70e-16, "err_eb": 3.72e-15},
    "schr2": {"energy_drift": 4.44e-16, "div_b_drift": 6.88e-14, "gauss_f4": None,
              "gauss_f8": None, "err_eb": 3.83e-2},
}


@dataclass(frozen=True)
class ComplexityEstimate:
    """Leading-order cost of simulating ``exp(-iHt)``; all constants are 1."""

    sparsity: int
    h_max: float
    t: float
    delta: float
    m_h: int = 0
    m: int = 0
    d: int = 1
    queries: Optional[float] = None
    gates: Optional[float] = None

    @property
    def tau(self):
        return self.sparsity * self.h_max * self.t

    def to_dict(self):
        out = asdict(self)
        out["tau"] = self.tau
        out["label"] = "estimate"
        return out


@dataclass(frozen=True)
class DiagnosticsReport:
    energy_initial: float = 0.0
    energy_final: float = 0.0
    energy_drift: float = 0.0
    div_b_drift: Optional[float] = None
    gauss_f4: Optional[float] = None
    gauss_f8: Optional[float] = None
    err_eb: Optional[float] = None
    complexity: Optional[ComplexityEstimate] = None

    def __post_init__(self):
        for name in ("energy_initial", "energy_final", "energy_drift", "div_b_drift",
                     "gauss_f4", "gauss_f8", "err_eb"):
            val = getattr(self, name)
            if val is not None and not (math.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {val}")

    def to_dict(self):
        out = {k: getattr(self, k) for k in ("energy_initial", "energy_final", "energy_drift",
                                             "div_b_drift", "gauss_f4", "gauss_f8", "err_eb")}
        out["complexity"] = None if self.complexity is None else self.complexity.to_dict()
        return out


_ENERGY_LAYOUTS = ("yee_eb", "yee_tm", "te1d", "eb", "rs8")


def discrete_energy(state):
    """``sum |field|^2 * cell volume`` over every component and sample.

    For the RS layout the sum is taken over the recovered scaled fields, which
    is ``2 |Psi|^2`` per point.
    """
    if state.layout not in _ENERGY_LAYOUTS:
        raise ValueError(f"discrete_energy does not support layout {state.layout}")
    total = float(np.sum(np.abs(state.data) ** 2))
    if state.layout == "rs8":
        total *= 2
    return total * state.grid.cell_volume


def err_eb(numeric, exact):
    """Max-norm of the pointwise difference over all components."""
    if numeric.layout != exact.layout:
        raise ValueError(f"layout mismatch: {numeric.layout} vs {exact.layout}")
    if numeric.data.shape != exact.data.shape:
        raise ValueError("states have different sizes")
    return float(np.max(np.abs(numeric.data - exact.data))) if numeric.data.size else 0.0


def gauss_monitors(psi, transforms=None):
    """``(max |F slot 3|, max |F slot 7|)`` of ``F = T^dag Psi``."""
    if psi.layout != "rs8":
        raise ValueError(f"gauss_monitors needs the rs8 layout, got {psi.layout}")
    t = rs_matrix() if transforms is None else transforms.t_rs
    f = t.conj().T @ psi.blocks()
    return float(np.max(np.abs(f[GAUSS_SLOTS[0]]))), float(np.max(np.abs(f[GAUSS_SLOTS[1]])))


# ---- exact solutions -------------------------------------------------------

def exact_tm_2d(t, x, y):
    """Plane wave ``(Ez, Bx, By)`` travelling along ``(1, 2)/sqrt 5``."""
    ez = np.sin(np.pi * (x + 2 * y + np.sqrt(5) * t))
    return ez, -2 * ez / np.sqrt(5), ez / np.sqrt(5)


def tm_2d_fields(t, x, y):
    ez, bx, by = exact_tm_2d(t, x, y)
    zero = np.zeros_like(ez)
    return zero, zero, ez, bx, by, zero


_K_PEC = 2 * np.pi / 5
_K_IMP = np.pi / 5


def exact_pec_1d(t, x, variant="consistent"):
    """Manufactured ``(Ex, Ey, Bz)`` on ``[0, 15]`` with a conducting wall at each end.

    ``variant="printed"`` returns the transverse field exactly as published,
    which neither vanishes at the walls nor satisfies Faraday's law; the
    default rescales it to ``(cos(kx) - 1)/k``, which does both.
    """
    x = np.asarray(x, dtype=float)
    k = _K_PEC
    ex = np.sin(k * (x + t))
    if variant == "consistent":
        ey = (np.cos(k * x) - 1) / k
    elif variant == "printed":
        ey = k * (np.cos(k * x) / (2 * np.pi) - 1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    bz = t * np.sin(k * x)
    return ex, ey + 0 * t, bz


def pec_1d_source(t, x, variant="consistent"):
    """``(Jx, Jy, Jz, rho)`` making :func:`exact_pec_1d` satisfy Ampere's law."""
    x = np.asarray(x, dtype=float)
    k = _K_PEC
    c = np.cos(k * (x + t))
    zero = np.zeros_like(x)
    # Ey is static in both variants, so Jy = -dBz/dx
    return -k * c, -t * k * np.cos(k * x), zero, k * c


def exact_impedance_1d(t, x):
    """Manufactured ``(Ex, Ey, Bz)`` on ``[0, 15]`` meeting impedance walls at ``v = 1``."""
    x = np.asarray(x, dtype=float)
    k = _K_IMP
    ex = -np.sin(k * (x + t))
    ey = np.cos(k * x) / k
    bz = t * np.sin(k * x) - 1 / k
    return ex, ey + 0 * t, bz


def impedance_1d_source(t, x):
    x = np.asarray(x, dtype=float)
    k = _K_IMP
    c = np.cos(k * (x + t))
    return k * c, -t * k * np.cos(k * x), np.zeros_like(x), -k * c


def te_fields(exact):
    """Lift an ``(Ex, Ey, Bz)`` function to the six-component form ``(t, x) -> E, B``."""
    def fields(t, x, *args):
        ex, ey, bz = exact(t, x, *args)
        zero = np.zeros(np.shape(x))
        return ex, ey, zero, zero, zero, bz
    return fields


@dataclass(frozen=True)
class FresnelSetup:
    eps1: float = 1.0
    mu1: float = 1.0
    eps2: float = 2.0
    mu2: float = 2.0
    omega: float = 0.5
    position: float = 0.0

    @property
    def impedances(self):
        return math.sqrt(self.mu1 / self.eps1), math.sqrt(self.mu2 / self.eps2)

    @property
    def wavenumbers(self):
        return (self.omega * math.sqrt(self.eps1 * self.mu1),
                self.omega * math.sqrt(self.eps2 * self.mu2))

    @property
    def reflection(self):
        z1, z2 = self.impedances
        return (z2 - z1) / (z1 + z2)

    @property
    def transmission(self):
        z1, z2 = self.impedances
        return 2 * z2 / (z1 + z2)


def exact_interface(t, x, setup=None, side=None):
    """Complex plane wave ``(Ey, Bz)`` hitting a planar interface from the left.

    ``side`` forces the left (0) or right (1) formula; by default it is chosen
    from the sign of ``x - position``.
    """
    s = setup or FresnelSetup()
    x = np.asarray(x, dtype=float)
    k1, k2 = s.wavenumbers
    z1, z2 = s.impedances
    v1 = 1 / math.sqrt(s.eps1 * s.mu1)
    xi = x - s.position
    inc = np.exp(1j * (s.omega * t - k1 * xi))
    ref = s.reflection * np.exp(1j * (s.omega * t + k1 * xi))
    tra = np.exp(1j * (s.omega * t - k2 * xi))
    ey_left, bz_left = inc + ref, (inc - ref) / v1
    ey_right, bz_right = s.transmission * tra, 2 * s.mu2 / (z1 + z2) * tra
    if side is None:
        left = xi < 0
    else:
        left = np.full(x.shape, side == 0)
    return np.where(left, ey_left, ey_right), np.where(left, bz_left, bz_right)


def interface_fields(setup=None):
    """``(t, x, side) -> six components`` for the interface builder."""
    def fields(t, x, side=None):
        ey, bz = exact_interface(t, x, setup, side)
        zero = np.zeros(np.shape(x), dtype=complex)
        return zero, ey, zero, zero, zero, bz
    return fields


# ---- cost estimates --------------------------------------------------------

def gate_complexity(est):
    """Fill ``queries`` and ``gates`` for an ``s``-sparse Hamiltonian.

    With ``L = log(tau/delta)`` (natural log): ``queries = tau L / log L`` and
    ``gates = tau (m_h + L^2.5) L / log L``.
    """
    tau = est.tau
    if est.delta <= 0 or tau <= 0 or tau / est.delta <= math.e:
        raise ValueError("gate_complexity needs tau/delta > e")
    big = math.log(tau / est.delta)
    ratio = big / math.log(big)
    return replace(est, queries=tau * ratio, gates=tau * (est.m_h + big ** 2.5) * ratio)


def spectral_gate_estimate(cells, m, d):
    """``M((d+2)m^2 + 4m)/log m + m log m`` for the Fourier-spectral lift."""
    return cells * ((d + 2) * m ** 2 + 4 * m) / math.log(m) + m * math.log(m)


def yee_gate_estimate(cells, m, d):
    """``M((d+2)m^2 + 2m)/log m + m log m`` for the Yee lift."""
    return cells * ((d + 2) * m ** 2 + 2 * m) / math.log(m) + m * math.log(m)


def estimate_for(s, t, delta=1e-3, dim=1, cells=None):
    """Cost estimate of a Schrodingerised system evolved to time ``t``."""
    from .schrodingerize import hamiltonian_stats

    sparsity, bound = hamiltonian_stats(s)
    m_h = int(math.ceil(math.log2(max(2, s.n * s.pgrid.n))))
    m = int(math.ceil(math.log2(cells))) if cells else 0
    est = ComplexityEstimate(sparsity, bound, t, delta, m_h=m_h, m=m, d=dim)
    if est.tau / delta <= math.e:
        return est
    return gate_complexity(est)
