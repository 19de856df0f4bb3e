"""
Convergence studies against a fine reference solution.

No benchmark problem has a closed-form solution, so a run on a fine mesh
(N = M = 1024 for the full tables, 512 at desk scale) stands in for the exact
solution. Errors are max-norm differences over every coincident space-time
point of a coarse run, t = 0 and the boundary nodes included:

    error(h, tau) = max_{i, j} |u_ref(x_i, t_j) - u_i^j|
    rate          = log(error_coarse / error_fine) / log(step_coarse / step_fine)

Coarse meshes must divide the reference mesh; nothing is interpolated.

Complexity:
- refinement_study: one reference solve plus one solve per row; each solve is
  one O(N^3) matrix exponential and M steps of O(N^2).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .aligner import Aligner
from .config import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    DESK_REFERENCE,
    FULL_REFERENCE,
)
from .errors import NestingError, RegistryError, UndefinedRateError, ValidationError
from .models import Axis, ConvergenceRow, ConvergenceTable, ErrorReport, Problem, Trajectory
from .problems import builtin_problem
from .stepper import integrate

logger = logging.getLogger(__name__)

__all__ = [
    "builtin_problem",
    "max_error",
    "rate",
    "refinement_study",
    "StudyPreset",
    "PRESETS",
    "preset_study",
    "run_preset",
]


def max_error(ref: Trajectory, approx: Trajectory) -> ErrorReport:
    """Max-norm error of `approx` against a nested reference trajectory."""
    ref_values, approx_values = Aligner().align(ref, approx)
    error = float(np.max(np.abs(ref_values - approx_values)))
    return ErrorReport(
        h=approx.grid.h,
        tau=approx.mesh.tau,
        error=error,
        compared_points=int(approx_values.size),
    )


def rate(err_coarse: float, err_fine: float, s_coarse: float, s_fine: float) -> float:
    """Observed order between two resolutions with steps s_coarse > s_fine."""
    if not (err_coarse > 0 and err_fine > 0):
        raise UndefinedRateError(
            f"rate needs positive errors, got {err_coarse!r} and {err_fine!r}"
        )
    if not (s_coarse > 0 and s_fine > 0) or s_coarse <= s_fine:
        raise ValidationError(
            f"rate needs steps with s_coarse > s_fine > 0, got {s_coarse!r}, {s_fine!r}"
        )
    return math.log(err_coarse / err_fine) / math.log(s_coarse / s_fine)


def _check_resolutions(resolutions: Sequence[int], reference: int, label: str) -> List[int]:
    values = [int(r) for r in resolutions]
    if not values:
        raise ValidationError(f"need at least one {label} resolution")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{label} resolutions must strictly increase, got {values}")
    bad = [r for r in values if r < 1 or reference % r]
    if bad:
        raise NestingError(f"{label} resolutions {bad} do not divide the reference {reference}")
    return values


def refinement_study(
    problem: Problem,
    alpha: float,
    axis: Union[Axis, str],
    fixed_resolution: Optional[int],
    varying_resolutions: Sequence[int],
    ref_N: int,
    ref_M: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    jobs: int = 1,
) -> ConvergenceTable:
    """Errors and rates along one axis against a single reference run.

    Time axis: space resolution fixed (default ref_N), time resolutions vary.
    Space axis: time resolution fixed (default ref_M), space resolutions vary.

    Args:
        problem: problem definition; its alpha is replaced by `alpha`.
        alpha: fractional order for the study.
        axis: "time" or "space".
        fixed_resolution: N (time axis) or M (space axis); None for the reference value.
        varying_resolutions: increasing M (time) or N (space) values.
        ref_N: reference space resolution.
        ref_M: reference time resolution.
        tol: fixed-point tolerance.
        max_iter: fixed-point iteration cap.
        jobs: worker threads for the coarse rows.

    Returns:
        ConvergenceTable with one row per varying resolution.
    """
    axis = Axis(axis)
    problem = problem.with_alpha(alpha)
    if jobs < 1:
        raise ValidationError(f"jobs must be >= 1, got {jobs}")

    if axis is Axis.TIME:
        fixed = ref_N if fixed_resolution is None else int(fixed_resolution)
        if ref_N % fixed:
            raise NestingError(f"space resolution {fixed} does not divide the reference {ref_N}")
        varying = _check_resolutions(varying_resolutions, ref_M, "time")
        configs: List[Tuple[int, int]] = [(fixed, m) for m in varying]
        expected = 2.0
    else:
        fixed = ref_M if fixed_resolution is None else int(fixed_resolution)
        if ref_M % fixed:
            raise NestingError(f"time resolution {fixed} does not divide the reference {ref_M}")
        varying = _check_resolutions(varying_resolutions, ref_N, "space")
        configs = [(n, fixed) for n in varying]
        expected = 2.0 - float(alpha)

    # the reference keeps only the time levels some coarse run needs
    wanted = sorted({j * (ref_M // m) for _, m in configs for j in range(m + 1)})
    logger.info(
        "%s study %s alpha=%.2f: reference N=%d M=%d", axis.value, problem.name, alpha, ref_N, ref_M
    )
    reference = integrate(problem, ref_N, ref_M, tol, max_iter, store_steps=wanted)

    def solve_row(config: Tuple[int, int]) -> Tuple[ErrorReport, Trajectory]:
        n, m = config
        coarse = integrate(problem, n, m, tol, max_iter)
        report = max_error(reference, coarse)
        logger.info("N=%d M=%d error=%.4e", n, m, report.error)
        return report, coarse

    if jobs == 1:
        results = [solve_row(c) for c in configs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(solve_row, configs))

    table = ConvergenceTable(
        problem=problem.name,
        alpha=float(alpha),
        axis=axis,
        fixed_resolution=fixed,
        ref_N=ref_N,
        ref_M=ref_M,
        expected_order=expected,
    )
    previous: Optional[Tuple[float, float]] = None
    for resolution, (report, coarse) in zip(varying, results):
        step = report.tau if axis is Axis.TIME else report.h
        row_rate: Optional[float] = None
        if previous is not None:
            try:
                row_rate = rate(previous[0], report.error, previous[1], step)
            except UndefinedRateError:
                row_rate = None
        table.rows.append(
            ConvergenceRow(
                resolution=resolution,
                h=report.h,
                tau=report.tau,
                error=report.error,
                rate=row_rate,
                compared_points=report.compared_points,
                stats=coarse.stats,
            )
        )
        previous = (report.error, step)
    return table


@dataclass(frozen=True)
class StudyPreset:
    """Parameters of one benchmark table and of its desk-scale variant."""

    name: str
    problem: str
    axis: Axis
    resolutions: Tuple[int, ...]
    desk_resolutions: Tuple[int, ...]
    reference: int = FULL_REFERENCE
    alphas: Tuple[float, ...] = (0.6, 0.7, 0.9)


# Example 1's cubic reaction needs tau <= 1/32 for the fixed-point iteration.
# Example 2 at 16 is still pre-asymptotic against a 512 reference.
PRESETS: Dict[str, StudyPreset] = {
    "table1": StudyPreset("table1", "example1", Axis.TIME, (32, 64, 128, 256), (32, 64, 128)),
    "table2": StudyPreset("table2", "example1", Axis.SPACE, (16, 32, 64, 128), (16, 32, 64, 128)),
    "table3": StudyPreset("table3", "example2", Axis.TIME, (64, 128, 256, 512), (32, 64, 128)),
    "table4": StudyPreset("table4", "example2", Axis.SPACE, (64, 128, 256, 512), (32, 64, 128)),
}


def preset_study(name: str, desk: bool = False) -> StudyPreset:
    """Look up a table preset; `desk` swaps in reference 512 and coarse levels <= 128."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise RegistryError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    if not desk:
        return preset
    return replace(
        preset,
        name=f"{preset.name}-desk",
        resolutions=preset.desk_resolutions,
        reference=DESK_REFERENCE,
    )


def run_preset(
    preset: StudyPreset,
    alpha: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    jobs: int = 1,
) -> ConvergenceTable:
    """Run one column (one alpha) of a table preset."""
    return refinement_study(
        builtin_problem(preset.problem),
        alpha,
        preset.axis,
        None,
        preset.resolutions,
        preset.reference,
        preset.reference,
        tol=tol,
        max_iter=max_iter,
        jobs=jobs,
    )
