"""Exception hierarchy for the fracdiff package.

Two families matter to callers: `ValidationError` (bad input, reported as a
usage error by the CLI) and `NumericalError` (the computation itself failed).
"""

from typing import Optional


class FracDiffError(Exception):
    """Root of every error raised by this package."""


class ValidationError(FracDiffError, ValueError):
    """A precondition on an argument was violated."""


class ShapeError(ValidationError):
    """Vector or matrix dimensions do not agree."""


class NestingError(ValidationError):
    """Meshes are not integer refinements of each other."""


class RegistryError(ValidationError, KeyError):
    """Unknown name looked up in one of the registries."""

    def __str__(self) -> str:
        # KeyError quotes its message; keep the diagnostic on one plain line
        return str(self.args[0]) if self.args else ""


class NumericalError(FracDiffError, ArithmeticError):
    """A numerical step produced an unusable result."""

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.step = step


class NonConvergenceError(NumericalError):
    """Fixed-point iteration hit its iteration cap before reaching tolerance."""

    def __init__(
        self,
        residual: float,
        iterations: int,
        tol: float,
        step: Optional[int] = None,
    ) -> None:
        super().__init__(
            f"fixed-point iteration did not converge after {iterations} "
            f"iterations: residual {residual:.3e} > tol {tol:.1e}",
            step=step,
        )
        self.residual = residual
        self.iterations = iterations
        self.tol = tol


class UndefinedRateError(NumericalError):
    """Convergence rate requested for a zero or negative error."""
