"""Mean first exit time and escape probability for SDEs with alpha-stable noise."""

from .discretization import DriftSpec, Grid, ProblemKind, ProblemSpec, build_grid, build_system
from .exit_solver import (
    SolutionProfile,
    analytic_escape_symmetric,
    analytic_met_symmetric,
    solve,
    symmetry_check,
)
from .levy_coefficients import LevyCoefficients, StableParams, c_alpha, char_fn, jump_coefficients
from .linalg import ConvergenceError, SingularMatrixError, SolveStats, direct_solve, gmres_solve
from .monte_carlo import McConfig, McEstimate, estimate_exit, sample_stable
from .verification import ConvergenceReport, manufactured_study, observed_order, self_convergence_study

__version__ = "0.1.0"

__all__ = [
    "DriftSpec",
    "Grid",
    "ProblemKind",
    "ProblemSpec",
    "build_grid",
    "build_system",
    "SolutionProfile",
    "analytic_escape_symmetric",
    "analytic_met_symmetric",
    "solve",
    "symmetry_check",
    "LevyCoefficients",
    "StableParams",
    "c_alpha",
    "char_fn",
    "jump_coefficients",
    "ConvergenceError",
    "SingularMatrixError",
    "SolveStats",
    "direct_solve",
    "gmres_solve",
    "McConfig",
    "McEstimate",
    "estimate_exit",
    "sample_stable",
    "ConvergenceReport",
    "manufactured_study",
    "observed_order",
    "self_convergence_study",
]
