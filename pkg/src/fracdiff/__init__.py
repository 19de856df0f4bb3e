"""Solver library for two-sided space-fractional diffusion equations.

The L1 formula discretizes the fractional operators in space, the IIF2
scheme integrates the resulting stiff system in time, and the harness
measures convergence orders against a fine reference run.
"""

from .coefficients import coeff_table, gamma
from .expm import expm, propagator
from .harness import max_error, rate, refinement_study
from .operator import apply_direct, assemble_operator, caputo_l1_left
from .problems import builtin_problem
from .stability import boundary_curve, boundary_point, boundary_residual
from .stepper import iif2_step, integrate

__all__ = [
    "apply_direct",
    "assemble_operator",
    "boundary_curve",
    "boundary_point",
    "builtin_problem",
    "caputo_l1_left",
    "coeff_table",
    "expm",
    "gamma",
    "iif2_step",
    "integrate",
    "max_error",
    "propagator",
    "rate",
    "refinement_study",
    "boundary_residual",
]
