"""Rothe / Legendre-Galerkin solver for wave equations with variable-order fractional damping."""
from .caputo import KernelWeights, apply_history, weights
from .galerkin import SpectralSpace, project_h1, project_l2, reconstruct
from .harness import ConvergenceTable, RunConfig, ao_rate, co_rate, run_table
from .kernels import BACKEND
from .legendre import Basis, gauss_rule
from .oracle import ManufacturedSolution, SeriesSolution, caputo_t2, error_L2, manufactured
from .profiles import CoefficientFn, MuProfile
from .stepper import ProblemSpec, RotheSolver, SpectralState, run

__version__ = "0.1.0"
