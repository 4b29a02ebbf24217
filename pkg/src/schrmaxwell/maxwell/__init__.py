"""Maxwell discretisations that produce :class:`LinearSystem` instances."""

from .grid import BoundarySpec, FieldState, GridSpec, InterfaceSpec, MediumParams
from .spectral import build_spectral_inhomogeneous, build_spectral_periodic, tanh_permittivity
from .transforms import build_transforms, rs_pack, rs_unpack
from .upwind import (boundary_coupling, build_interface_1d, build_upwind_1d,
                     interface_jump_matrices)
from .yee import build_yee_1d, build_yee_periodic, discrete_curl, discrete_div

__all__ = [
    "BoundarySpec", "FieldState", "GridSpec", "InterfaceSpec", "MediumParams",
    "build_spectral_inhomogeneous", "build_spectral_periodic", "tanh_permittivity",
    "build_transforms", "rs_pack", "rs_unpack", "boundary_coupling", "build_interface_1d",
    "build_upwind_1d", "interface_jump_matrices", "build_yee_1d", "build_yee_periodic",
    "discrete_curl", "discrete_div",
]
