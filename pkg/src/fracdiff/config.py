"""
Defaults and environment-driven settings.

The numeric defaults are the experimental parameters used for the benchmark
tables: fixed-point tolerance 1e-12 with at most 200 iterations, the three
q*tau values plotted for the stability boundary, and reference meshes of
1024 (full replication) or 512 (desk-scale runs).
"""

import os
from typing import Optional, Tuple

from .errors import ValidationError

DEFAULT_TOL: float = 1e-12
DEFAULT_MAX_ITER: int = 200

DEFAULT_QTAU: Tuple[float, ...] = (0.7, 1.2, 2.5)
DEFAULT_THETA_SAMPLES: int = 720
# Largest accepted residual of a traced stability-boundary point
BOUNDARY_TOLERANCE: float = 1e-12

# Trajectories larger than this many stored entries keep only requested steps
STORAGE_LIMIT: int = 2**26

FULL_REFERENCE: int = 1024
DESK_REFERENCE: int = 512

# Endpoint tolerance on u0 for user-supplied problems; registry problems relax it
ENDPOINT_TOLERANCE: float = 1e-12
REGISTRY_ENDPOINT_TOLERANCE: float = 1e-3

JOBS_ENV_VAR: str = "FRACDIFF_JOBS"


def resolve_jobs(cli_value: Optional[int] = None) -> int:
    """Return the worker count for concurrent study rows.

    Looks at the explicit value first, then the `FRACDIFF_JOBS` environment
    variable, and falls back to a single worker.

    Args:
        cli_value: value of `--jobs` when given on the command line.

    Returns:
        Positive worker count.
    """
    raw: Optional[object] = cli_value
    if raw is None:
        raw = os.environ.get(JOBS_ENV_VAR) or None
    if raw is None:
        return 1
    try:
        jobs = int(str(raw))
    except ValueError:
        raise ValidationError(f"{JOBS_ENV_VAR} must be an integer, got {raw!r}")
    if jobs < 1:
        raise ValidationError(f"jobs must be >= 1, got {jobs}")
    return jobs
