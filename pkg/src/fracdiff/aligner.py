from typing import Tuple

import numpy as np

from .errors import NestingError
from .models import Trajectory


class Aligner:
    """Align a coarse trajectory with a nested reference by index, never by interpolation.

    Coarse node i sits at reference node i * (N_ref / N) and coarse step j at
    reference step j * (M_ref / M).
    """

    def ratios(self, ref: Trajectory, approx: Trajectory) -> Tuple[int, int]:
        """Refinement factors (space, time) of `ref` over `approx`."""
        if not (
            np.isclose(ref.grid.a, approx.grid.a)
            and np.isclose(ref.grid.b, approx.grid.b)
            and np.isclose(ref.mesh.T, approx.mesh.T)
        ):
            raise NestingError("trajectories cover different space-time domains")
        if ref.grid.N % approx.grid.N or ref.mesh.M % approx.mesh.M:
            raise NestingError(
                f"reference (N={ref.grid.N}, M={ref.mesh.M}) does not refine "
                f"(N={approx.grid.N}, M={approx.mesh.M})"
            )
        return ref.grid.N // approx.grid.N, ref.mesh.M // approx.mesh.M

    def align(self, ref: Trajectory, approx: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
        """Coincident values, boundary nodes included.

        Returns:
            (reference values, coarse values), both of shape (steps, N + 1)
            over every stored coarse step.

        Raises:
            NestingError: if the reference lacks any coarse time level.
        """
        space, time = self.ratios(ref, approx)
        ref_full = ref.full_states()
        approx_full = approx.full_states()

        if len(ref.steps) == 0 or len(approx.steps) == 0:
            raise NestingError("both trajectories need at least one stored state")
        wanted = approx.steps * time
        rows = np.searchsorted(ref.steps, wanted)
        present = (rows < len(ref.steps)) & (ref.steps[np.minimum(rows, len(ref.steps) - 1)] == wanted)
        if not np.all(present):
            missing = approx.steps[~present].tolist()
            raise NestingError(f"reference does not store coarse steps {missing}")

        cols = np.arange(approx.grid.N + 1) * space
        return ref_full[rows][:, cols], approx_full
