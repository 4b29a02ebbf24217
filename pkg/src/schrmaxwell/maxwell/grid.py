"""Grids, media, boundary descriptions and field containers."""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic-style grid with ``m`` cells per axis.

    Flattened arrays use the ordering ``|j3> (x) |j2> (x) |j1>`` (x fastest), so
    numpy arrays are shaped ``(m_z, m_y, m_x)`` restricted to present axes.
    """

    dim: int
    m: int
    lengths: tuple
    origin: tuple = None

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        if self.m < 2 or self.m % 2:
            raise ValueError(f"m must be even and >= 2, got {self.m}")
        lengths = tuple(float(x) for x in np.broadcast_to(self.lengths, (self.dim,)))
        if min(lengths) <= 0:
            raise ValueError("lengths must be positive")
        object.__setattr__(self, "lengths", lengths)
        origin = (0.0,) * self.dim if self.origin is None else tuple(
            float(x) for x in np.broadcast_to(self.origin, (self.dim,)))
        object.__setattr__(self, "origin", origin)

    @property
    def dx(self):
        return tuple(length / self.m for length in self.lengths)

    @property
    def shape(self):
        return (self.m,) * self.dim

    @property
    def size(self):
        return self.m ** self.dim

    @property
    def cell_volume(self):
        return float(np.prod(self.dx))

    def axis(self, k, offset=0.0):
        """Coordinates ``origin + (j + offset) * dx`` along axis ``k`` (0 = x)."""
        return self.origin[k] + (np.arange(self.m) + offset) * self.dx[k]

    def mesh(self, offsets=None):
        """Coordinate arrays ``(x, y, z)[:dim]``, each of shape ``self.shape``."""
        offsets = offsets or (0.0,) * self.dim
        axes = [self.axis(k, offsets[k]) for k in range(self.dim)]
        # reversed so that x varies fastest in C order
        grids = np.meshgrid(*axes[::-1], indexing="ij")
        return tuple(grids[::-1])


@dataclass(frozen=True)
class MediumParams:
    """Sampled permittivity and permeability on a set of points."""

    eps: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        eps = np.atleast_1d(np.asarray(self.eps, dtype=float))
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        eps, mu = np.broadcast_arrays(eps, mu)
        if np.any(eps <= 0) or np.any(mu <= 0):
            raise ValueError("eps and mu must be positive")
        object.__setattr__(self, "eps", eps.copy())
        object.__setattr__(self, "mu", mu.copy())

    @classmethod
    def constant(cls, eps=1.0, mu=1.0):
        return cls(np.array([eps]), np.array([mu]))

    @property
    def v(self):
        return 1.0 / np.sqrt(self.eps * self.mu)

    @property
    def eps_bar(self):
        return np.log(self.eps) / 2

    @property
    def mu_bar(self):
        return np.log(self.mu) / 2

    @property
    def is_constant(self):
        return bool(np.ptp(self.eps) == 0 and np.ptp(self.mu) == 0)

    def scalar(self):
        """``(eps, mu, v)`` of a constant medium."""
        if not self.is_constant:
            raise ValueError("medium is not constant")
        eps, mu = float(self.eps.flat[0]), float(self.mu.flat[0])
        return eps, mu, 1.0 / np.sqrt(eps * mu)


BOUNDARY_KINDS = ("periodic", "perfect_conductor", "impedance", "inflow_exact")


@dataclass(frozen=True)
class BoundarySpec:
    left: str = "periodic"
    right: str = "periodic"
    surface_normal: tuple = (1.0, 0.0, 0.0)
    impedance_z: Optional[float] = None

    def __post_init__(self):
        for side in (self.left, self.right):
            if side not in BOUNDARY_KINDS:
                raise ValueError(f"unknown boundary kind {side!r}")
        if (self.left == "periodic") != (self.right == "periodic"):
            raise ValueError("periodic boundaries must be used on both sides")


@dataclass(frozen=True)
class InterfaceSpec:
    """Planar interface at ``position`` between two constant media.

    ``normal`` points into the left medium.  Jump matrices are filled by
    :func:`schrmaxwell.maxwell.upwind.interface_jump_matrices`.
    """

    position: float
    eps1: float
    mu1: float
    eps2: float
    mu2: float
    normal: tuple = (-1.0, 0.0, 0.0)
    r1: Optional[np.ndarray] = None
    r2: Optional[np.ndarray] = None
    r1_tilde: Optional[np.ndarray] = None
    r2_tilde: Optional[np.ndarray] = None

    @property
    def medium_left(self):
        return MediumParams.constant(self.eps1, self.mu1)

    @property
    def medium_right(self):
        return MediumParams.constant(self.eps2, self.mu2)


LAYOUT_COMPONENTS = {
    "rs8": tuple(f"psi{i}" for i in range(8)),
    "yee_eb": ("Ex", "Ey", "Ez", "Bx", "By", "Bz"),
    "yee_tm": ("Ez", "Bx", "By"),
    "te1d": ("Ex", "Ey", "Bz"),
    "te1d_char": tuple(f"chi{i}" for i in range(8)),
    "eb": ("Ex", "Ey", "Ez", "Bx", "By", "Bz"),
}


@dataclass(frozen=True)
class FieldState:
    """Field samples in one of the known layouts.

    ``data`` is the flat component-major vector.  ``points`` optionally holds
    the sample coordinates of each component as an array of shape
    ``(n_points, dim)``; staggered layouts differ per component.
    """

    layout: str
    data: np.ndarray
    grid: GridSpec
    points: Optional[Sequence[np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.layout not in LAYOUT_COMPONENTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        data = np.asarray(self.data)
        if data.size % len(self.components):
            raise ValueError(f"data length {data.size} does not fit layout {self.layout}")
        object.__setattr__(self, "data", data)

    @property
    def components(self):
        return LAYOUT_COMPONENTS[self.layout]

    @property
    def n_points(self):
        return self.data.size // len(self.components)

    def component(self, name):
        k = self.components.index(name)
        return self.data[k * self.n_points:(k + 1) * self.n_points]

    def blocks(self):
        return self.data.reshape(len(self.components), self.n_points)
