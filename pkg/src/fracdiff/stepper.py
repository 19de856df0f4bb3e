"""
Second-order implicit integration factor (IIF2) time stepping.

One step of du/dt + A u = f(u) reads

    u^{j+1} = E (u^j + tau/2 f(u^j)) + tau/2 f(u^{j+1}),    E = exp(-A tau)

The known part v = E (u^j + tau/2 f(u^j)) is formed once per step; the
implicit reaction is resolved by fixed-point iteration u <- v + tau/2 f(u),
seeded with the explicit predictor v + tau/2 f(u^j). The iteration contracts
when tau * L_f / 2 < 1 for the reaction's Lipschitz constant L_f.

Complexity:
- integrate: one dense expm (O(N^3)), then per step O(N^2) for the matvec
  plus O(N) per fixed-point iteration.
- Space: O(N^2) for E, O(K N) for K stored states.
"""

import logging
import warnings
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_MAX_ITER, DEFAULT_TOL, STORAGE_LIMIT
from .errors import NonConvergenceError, NumericalError, ShapeError, ValidationError
from .expm import propagator
from .models import Problem, Propagator, Reaction, StepStats, TimeMesh, Trajectory
from .operator import assemble_operator

logger = logging.getLogger(__name__)


class ContractionWarning(RuntimeWarning):
    """tau * L_f / 2 >= 1: the fixed-point iteration is not guaranteed to contract."""


def iif2_step(
    u_j: np.ndarray,
    E: Propagator,
    f: Reaction,
    tau: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Tuple[np.ndarray, StepStats]:
    """Advance one IIF2 step.

    Args:
        u_j: current interior state.
        E: propagator exp(-A tau) for this tau.
        f: elementwise reaction.
        tau: step size.
        tol: max-norm tolerance on successive iterates.
        max_iter: iteration cap.

    Returns:
        (u^{j+1}, StepStats).

    Raises:
        NonConvergenceError: the cap was reached above tolerance, or the
            iterates stopped being finite.
    """
    u_j = np.asarray(u_j, dtype=float)
    if u_j.ndim != 1 or u_j.shape[0] != E.size:
        raise ShapeError(f"state of shape {u_j.shape} does not match propagator size {E.size}")
    if not tol > 0:
        raise ValidationError(f"tolerance must be > 0, got {tol!r}")
    if int(max_iter) != max_iter or max_iter < 1:
        raise ValidationError(f"max_iter must be an integer >= 1, got {max_iter!r}")
    if not np.isclose(tau, E.tau, rtol=1e-12, atol=0.0):
        raise ValidationError(f"step {tau!r} does not match the propagator step {E.tau!r}")

    half = 0.5 * tau
    f_j = f(u_j)
    v = E.E @ (u_j + half * f_j)

    current = v + half * f_j
    residual = np.inf
    iteration = 0
    for iteration in range(1, int(max_iter) + 1):
        following = v + half * f(current)
        residual = float(np.max(np.abs(following - current))) if following.size else 0.0
        current = following
        if not np.isfinite(residual):
            break
        if residual <= tol:
            return current, StepStats(iterations=iteration, residual=residual, converged=True)

    raise NonConvergenceError(residual=residual, iterations=iteration, tol=tol)


def check_contraction(reaction: Reaction, state: np.ndarray, tau: float) -> float:
    """Warn when the fixed-point map is not a contraction near `state`.

    Returns:
        The estimate tau * L_f / 2.
    """
    factor = 0.5 * tau * reaction.lipschitz(state)
    if factor >= 1.0:
        message = (
            f"tau*L_f/2 = {factor:.3g} >= 1 for reaction {reaction.name!r}; "
            f"fixed-point iteration may not converge (tau={tau:g})"
        )
        logger.warning(message)
        warnings.warn(message, ContractionWarning, stacklevel=3)
    return factor


def _stored_steps(M: int, size: int, store_steps: Optional[Iterable[int]]) -> np.ndarray:
    if store_steps is not None:
        steps = np.unique(np.asarray(list(store_steps), dtype=int))
        if steps.size and (steps[0] < 0 or steps[-1] > M):
            raise ValidationError(f"stored steps must lie in 0..{M}")
        return steps
    if (M + 1) * size <= STORAGE_LIMIT:
        return np.arange(M + 1)
    logger.warning(
        "trajectory of %d x %d entries exceeds the storage budget; keeping t=0 and t=T only",
        M + 1,
        size,
    )
    return np.array([0, M])


def integrate(
    problem: Problem,
    N: int,
    M: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    store_steps: Optional[Iterable[int]] = None,
) -> Trajectory:
    """Solve a problem on N space intervals with M IIF2 steps.

    The propagator is computed once and reused for every step.

    Args:
        problem: problem definition.
        N: number of space intervals (N >= 2).
        M: number of time steps (M >= 1).
        tol: fixed-point tolerance.
        max_iter: fixed-point iteration cap.
        store_steps: time indices to keep; by default all of them when they
            fit the storage budget.

    Returns:
        Trajectory with the stored states and statistics for every step.
    """
    grid = problem.grid(N)
    mesh = TimeMesh(problem.T, M)
    tau = mesh.tau

    op = assemble_operator(grid, problem.alpha, problem.diffusion_samples(grid))
    E = propagator(op, tau)

    u = problem.initial_state(grid)
    check_contraction(problem.reaction, u, tau)

    steps = _stored_steps(M, u.size, store_steps)
    keep = set(int(s) for s in steps)
    states: List[np.ndarray] = []
    if 0 in keep:
        states.append(u.copy())

    stats: List[StepStats] = []
    for j in range(M):
        try:
            u, step_stats = iif2_step(u, E, problem.reaction, tau, tol, max_iter)
        except NonConvergenceError as exc:
            raise NonConvergenceError(
                residual=exc.residual, iterations=exc.iterations, tol=tol, step=j + 1
            ) from None
        if not np.all(np.isfinite(u)):
            raise NumericalError("solution became non-finite", step=j + 1)
        stats.append(step_stats)
        if j + 1 in keep:
            states.append(u.copy())
        logger.debug(
            "step %d/%d iterations=%d residual=%.3e",
            j + 1,
            M,
            step_stats.iterations,
            step_stats.residual,
        )

    stored = np.vstack(states) if states else np.empty((0, u.size))
    return Trajectory(grid=grid, mesh=mesh, steps=steps, states=stored, stats=stats, operator=op)
