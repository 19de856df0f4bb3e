from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np

from .errors import ShapeError, ValidationError

Vector = np.ndarray
Matrix = np.ndarray

# d(x, alpha) -> samples; the alpha argument lets d-(x) = x**alpha follow the order
CoefficientFn = Callable[[np.ndarray, float], np.ndarray]
InitialFn = Callable[[np.ndarray], np.ndarray]


def _frozen_array(values: Any) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FractionalOrder:
    """Fractional order alpha, restricted to the open interval (1/2, 1)."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not np.isfinite(v) or not (0.5 < v < 1.0):
            raise ValidationError(f"alpha must lie in (0.5, 1), got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def beta(self) -> float:
        """Exponent 1 - alpha of the L1 weights."""
        return 1.0 - self.value

    @classmethod
    def coerce(cls, alpha: Union[float, "FractionalOrder"]) -> "FractionalOrder":
        if isinstance(alpha, FractionalOrder):
            return alpha
        return cls(float(alpha))


@dataclass(frozen=True)
class CoeffTable:
    """Normalized L1 weights a_i and their first differences g_k."""

    alpha: FractionalOrder
    a: np.ndarray
    g: np.ndarray

    @property
    def n(self) -> int:
        return int(self.a.shape[0])


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_i = a + i*h on [a, b] with N intervals."""

    a: float
    b: float
    N: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise ValidationError(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.N) != self.N or self.N < 2:
            raise ValidationError(f"N must be an integer >= 2, got {self.N}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    def nodes(self) -> np.ndarray:
        """All N+1 nodes; the last one is pinned to b."""
        x = self.a + np.arange(self.N + 1) * self.h
        x[-1] = self.b
        return x

    def interior(self) -> np.ndarray:
        return self.nodes()[1:-1]


@dataclass(frozen=True)
class DiffusionSamples:
    """d+ at x_0..x_{N-1} and d- at x_1..x_N."""

    d_plus: np.ndarray
    d_minus: np.ndarray

    def __post_init__(self) -> None:
        dp = _frozen_array(self.d_plus)
        dm = _frozen_array(self.d_minus)
        if dp.ndim != 1 or dm.ndim != 1 or dp.shape != dm.shape:
            raise ShapeError(
                f"diffusion samples must be two vectors of equal length, "
                f"got {dp.shape} and {dm.shape}"
            )
        if not (np.all(np.isfinite(dp)) and np.all(np.isfinite(dm))):
            raise ValidationError("diffusion samples must be finite")
        if np.any(dp < 0) or np.any(dm < 0):
            raise ValidationError("diffusion coefficients must be nonnegative")
        object.__setattr__(self, "d_plus", dp)
        object.__setattr__(self, "d_minus", dm)

    @property
    def N(self) -> int:
        return int(self.d_plus.shape[0])


@dataclass(frozen=True)
class Operator:
    """Dense discrete operator A = eta*(GL+ D+ GR+ + GL- D- GR-)."""

    A: np.ndarray
    eta: float
    alpha: FractionalOrder
    grid: Grid
    blocks: Optional[Dict[str, np.ndarray]] = None

    @property
    def size(self) -> int:
        return int(self.A.shape[0])


@dataclass(frozen=True)
class Propagator:
    """The matrix exponential exp(-A*tau) paired with its step."""

    E: np.ndarray
    tau: float

    @property
    def size(self) -> int:
        return int(self.E.shape[0])


@dataclass(frozen=True)
class Reaction:
    """Elementwise reaction term f(u) with its derivative."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    params: Dict[str, float] = field(default_factory=dict)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(u), dtype=float)

    def lipschitz(self, values: np.ndarray, samples: int = 65) -> float:
        """Estimate max |f'(u)| over the range spanned by `values`.

        The range is sampled uniformly and the given values themselves are
        included, so the estimate is exact for monotone |f'| on that range.
        """
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            return 0.0
        lo, hi = float(values.min()), float(values.max())
        points = np.concatenate([np.linspace(lo, hi, samples), values])
        return float(np.max(np.abs(self.derivative(points))))


@dataclass(frozen=True)
class Problem:
    """Two-sided fractional diffusion problem with homogeneous Dirichlet data."""

    name: str
    a: float
    b: float
    T: float
    alpha: float
    d_plus: CoefficientFn
    d_minus: CoefficientFn
    reaction: Reaction
    u0: InitialFn
    endpoint_tolerance: float = 1e-12

    def __post_init__(self) -> None:
        FractionalOrder.coerce(self.alpha)
        if not np.isfinite(self.T) or self.T <= 0:
            raise ValidationError(f"horizon T must be > 0, got {self.T}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise ValidationError(f"need a < b, got a={self.a}, b={self.b}")
        ends = np.asarray(self.u0(np.array([self.a, self.b], dtype=float)), dtype=float)
        if np.any(np.abs(ends) > self.endpoint_tolerance):
            raise ValidationError(
                f"u0 must vanish at the endpoints within {self.endpoint_tolerance:g}, "
                f"got u0(a)={ends[0]:.3e}, u0(b)={ends[1]:.3e}"
            )

    @property
    def order(self) -> FractionalOrder:
        return FractionalOrder.coerce(self.alpha)

    def with_alpha(self, alpha: float) -> "Problem":
        return replace(self, alpha=float(alpha))

    def grid(self, N: int) -> Grid:
        return Grid(self.a, self.b, N)

    def diffusion_samples(self, grid: Grid) -> DiffusionSamples:
        """Sample d+ on x_0..x_{N-1} and d- on x_1..x_N."""
        x = grid.nodes()
        dp = np.asarray(self.d_plus(x[:-1], self.alpha), dtype=float)
        dm = np.asarray(self.d_minus(x[1:], self.alpha), dtype=float)
        return DiffusionSamples(np.broadcast_to(dp, (grid.N,)), np.broadcast_to(dm, (grid.N,)))

    def initial_state(self, grid: Grid) -> np.ndarray:
        """u0 at the interior nodes; the boundary values are taken as zero."""
        return np.asarray(self.u0(grid.interior()), dtype=float).copy()


@dataclass(frozen=True)
class TimeMesh:
    T: float
    M: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.T) or self.T <= 0:
            raise ValidationError(f"horizon T must be > 0, got {self.T}")
        if int(self.M) != self.M or self.M < 1:
            raise ValidationError(f"M must be an integer >= 1, got {self.M}")

    @property
    def tau(self) -> float:
        return self.T / self.M

    def time(self, j: int) -> float:
        return j * self.tau

    def times(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.tau


@dataclass(frozen=True)
class StepStats:
    iterations: int
    residual: float
    converged: bool


@dataclass
class Trajectory:
    """Stored solution states u^j at the interior nodes.

    `steps` holds the time indices j of the stored rows of `states`; when the
    whole run fits the storage budget it is simply 0..M.
    `operator` is the matrix A the run was computed with, when known.
    """

    grid: Grid
    mesh: TimeMesh
    steps: np.ndarray
    states: np.ndarray
    stats: List[StepStats]
    operator: Optional[Operator] = None

    @property
    def times(self) -> np.ndarray:
        return self.steps * self.mesh.tau

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def state_at(self, step: int) -> np.ndarray:
        idx = np.searchsorted(self.steps, step)
        if idx >= len(self.steps) or self.steps[idx] != step:
            raise KeyError(f"step {step} was not stored")
        return self.states[idx]

    def full_states(self) -> np.ndarray:
        """States including the zero Dirichlet values at x_0 and x_N."""
        return np.pad(self.states, ((0, 0), (1, 1)))


@dataclass(frozen=True)
class StabilityPoint:
    theta: float
    q_tau: float
    lambda_r: float
    lambda_i: float
    c: float

    @property
    def lam(self) -> complex:
        return complex(self.lambda_r, self.lambda_i)


@dataclass(frozen=True)
class StabilityCurve:
    q_tau: float
    points: List[StabilityPoint]


class Axis(str, Enum):
    TIME = "time"
    SPACE = "space"


@dataclass(frozen=True)
class ErrorReport:
    h: float
    tau: float
    error: float
    compared_points: int


@dataclass
class ConvergenceRow:
    resolution: int
    h: float
    tau: float
    error: float
    rate: Optional[float]
    compared_points: int
    stats: List[StepStats] = field(default_factory=list)


@dataclass
class ConvergenceTable:
    problem: str
    alpha: float
    axis: Axis
    fixed_resolution: int
    ref_N: int
    ref_M: int
    expected_order: float
    rows: List[ConvergenceRow] = field(default_factory=list)

    @property
    def rates(self) -> List[Optional[float]]:
        return [r.rate for r in self.rows]

    @property
    def errors(self) -> List[float]:
        return [r.error for r in self.rows]
