"""Classical emulation of Schrodingerised Maxwell solvers."""

from .schrodingerize import (LinearSystem, PGrid, RecoverySpec, SchrodingerisedSystem, build,
                             homogenize, initial_extension, make_pgrid, recover)
from .evolution import EvolutionPlan, evolve_backward_euler, evolve_exact, reference_solve

__version__ = "0.1.0"
