"""
Registries for reactions, diffusion coefficients and initial data, plus the two
benchmark problems.

Custom problems are described by registry names with numeric parameters, e.g.

    {
      "name": "my-run", "a": 0, "b": 1, "T": 0.5, "alpha": 0.75,
      "d_plus":   {"kind": "right_power", "params": {"origin": 1.0}},
      "d_minus":  {"kind": "constant", "params": {"value": 1.0}},
      "reaction": {"kind": "sine"},
      "u0":       {"kind": "bump", "params": {"scale": 10, "left": 0, "right": 1}}
    }

There is no expression parser; anything not in a registry is rejected.
"""

from typing import Any, Callable, Dict, List, Mapping, Tuple

import numpy as np

from .config import ENDPOINT_TOLERANCE, REGISTRY_ENDPOINT_TOLERANCE
from .errors import RegistryError, ValidationError
from .models import CoefficientFn, InitialFn, Problem, Reaction


# reactions


def _zero(**_: float) -> Reaction:
    return Reaction(
        name="zero",
        fn=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
        derivative=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
    )


def _linear(rate: float = 1.0) -> Reaction:
    return Reaction(
        name="linear",
        fn=lambda u: rate * np.asarray(u, dtype=float),
        derivative=lambda u: np.full_like(np.asarray(u, dtype=float), rate),
        params={"rate": rate},
    )


def _cubic(scale: float = 100.0, threshold: float = 0.5) -> Reaction:
    """scale * u (u - threshold) (1 - u)."""

    def fn(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return scale * u * (u - threshold) * (1.0 - u)

    def derivative(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return scale * (-3.0 * u**2 + 2.0 * (1.0 + threshold) * u - threshold)

    return Reaction(
        name="cubic",
        fn=fn,
        derivative=derivative,
        params={"scale": scale, "threshold": threshold},
    )


def _sine(amplitude: float = 1.0) -> Reaction:
    return Reaction(
        name="sine",
        fn=lambda u: amplitude * np.sin(np.asarray(u, dtype=float)),
        derivative=lambda u: amplitude * np.cos(np.asarray(u, dtype=float)),
        params={"amplitude": amplitude},
    )


REACTIONS: Dict[str, Callable[..., Reaction]] = {
    "zero": _zero,
    "linear": _linear,
    "cubic": _cubic,
    "sine": _sine,
}


# diffusion coefficients d(x, alpha)


def _constant(value: float = 1.0) -> CoefficientFn:
    return lambda x, alpha: np.full_like(np.asarray(x, dtype=float), value)


def _left_power(origin: float = 0.0, scale: float = 1.0) -> CoefficientFn:
    """scale * (x - origin)^alpha."""
    return lambda x, alpha: scale * np.clip(np.asarray(x, dtype=float) - origin, 0.0, None) ** alpha


def _right_power(origin: float = 1.0, scale: float = 1.0) -> CoefficientFn:
    """scale * (origin - x)^alpha."""
    return lambda x, alpha: scale * np.clip(origin - np.asarray(x, dtype=float), 0.0, None) ** alpha


def _piecewise_exponential(
    scale: float = 1.5, jump: float = 0.0, right_value: float = 1.0
) -> CoefficientFn:
    """scale * exp(-x) left of the jump, right_value from the jump on.

    The node sitting exactly on the jump takes the right branch.
    """

    def fn(x: np.ndarray, alpha: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(x < jump, scale * np.exp(-x), right_value)

    return fn


COEFFICIENTS: Dict[str, Callable[..., CoefficientFn]] = {
    "constant": _constant,
    "left_power": _left_power,
    "right_power": _right_power,
    "piecewise_exponential": _piecewise_exponential,
}


# initial data u0(x)


def _bump(scale: float = 10.0, left: float = 0.0, right: float = 1.0) -> InitialFn:
    """scale * (x - left)^2 (right - x)^2."""

    def fn(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return scale * (x - left) ** 2 * (right - x) ** 2

    return fn


def _logistic_pulse(steepness: float = 10.0) -> InitialFn:
    """4 e^{s x} / (e^{s x} + 1)^2, evaluated as sech^2(s x / 2)."""

    def fn(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 1.0 / np.cosh(0.5 * steepness * x) ** 2

    return fn


def _sine_mode(left: float = 0.0, right: float = 1.0, amplitude: float = 1.0) -> InitialFn:
    def fn(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return amplitude * np.sin(np.pi * (x - left) / (right - left))

    return fn


INITIAL_DATA: Dict[str, Callable[..., InitialFn]] = {
    "bump": _bump,
    "logistic_pulse": _logistic_pulse,
    "sine_mode": _sine_mode,
}


def _lookup(registry: Mapping[str, Callable[..., Any]], kind: str, what: str) -> Callable[..., Any]:
    try:
        return registry[kind]
    except KeyError:
        raise RegistryError(
            f"unknown {what} {kind!r}; available: {', '.join(sorted(registry))}"
        ) from None


def make_reaction(kind: str, **params: float) -> Reaction:
    return _lookup(REACTIONS, kind, "reaction")(**params)


def make_coefficient(kind: str, **params: float) -> CoefficientFn:
    return _lookup(COEFFICIENTS, kind, "coefficient")(**params)


def make_initial(kind: str, **params: float) -> InitialFn:
    return _lookup(INITIAL_DATA, kind, "initial data")(**params)


# benchmark problems


def _example1(alpha: float = 0.6) -> Problem:
    """Smooth coefficients d+ = (1-x)^alpha, d- = x^alpha on [0, 1]."""
    return Problem(
        name="example1",
        a=0.0,
        b=1.0,
        T=1.0,
        alpha=alpha,
        d_plus=_right_power(origin=1.0),
        d_minus=_left_power(origin=0.0),
        reaction=_cubic(scale=100.0, threshold=0.5),
        u0=_bump(scale=10.0, left=0.0, right=1.0),
        endpoint_tolerance=REGISTRY_ENDPOINT_TOLERANCE,
    )


def _example2(alpha: float = 0.6) -> Problem:
    """Discontinuous d+ on [-1, 1] with a sine reaction."""
    return Problem(
        name="example2",
        a=-1.0,
        b=1.0,
        T=1.0,
        alpha=alpha,
        d_plus=_piecewise_exponential(scale=1.5, jump=0.0, right_value=1.0),
        d_minus=_constant(1.0),
        reaction=_sine(1.0),
        u0=_logistic_pulse(steepness=10.0),
        endpoint_tolerance=REGISTRY_ENDPOINT_TOLERANCE,
    )


BUILTIN_PROBLEMS: Dict[str, Callable[..., Problem]] = {
    "example1": _example1,
    "example2": _example2,
}


def builtin_problem(name: str) -> Problem:
    """Return a benchmark problem by name (alpha defaults to 0.6)."""
    return _lookup(BUILTIN_PROBLEMS, name, "problem")()


def registry_listing() -> Dict[str, List[str]]:
    """Names in every registry, for --help and diagnostics."""
    return {
        "problems": sorted(BUILTIN_PROBLEMS),
        "reactions": sorted(REACTIONS),
        "coefficients": sorted(COEFFICIENTS),
        "initial data": sorted(INITIAL_DATA),
    }


def _entry(config: Mapping[str, Any], key: str) -> Tuple[str, Dict[str, float]]:
    spec = config.get(key)
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ValidationError(f"problem config needs a {key!r} entry with a 'kind'")
    params = spec.get("params") or {}
    if not isinstance(params, Mapping):
        raise ValidationError(f"{key}.params must be a mapping")
    try:
        numeric = {str(k): float(v) for k, v in params.items()}
    except (TypeError, ValueError):
        raise ValidationError(f"{key}.params must be numeric") from None
    return str(spec["kind"]), numeric


def problem_from_config(config: Mapping[str, Any]) -> Problem:
    """Build a Problem from a parsed JSON mapping (see module docstring)."""
    missing = [k for k in ("a", "b", "T", "alpha") if k not in config]
    if missing:
        raise ValidationError(f"problem config is missing {', '.join(missing)}")

    dp_kind, dp_params = _entry(config, "d_plus")
    dm_kind, dm_params = _entry(config, "d_minus")
    r_kind, r_params = _entry(config, "reaction")
    u_kind, u_params = _entry(config, "u0")
    try:
        return Problem(
            name=str(config.get("name", "custom")),
            a=float(config["a"]),
            b=float(config["b"]),
            T=float(config["T"]),
            alpha=float(config["alpha"]),
            d_plus=make_coefficient(dp_kind, **dp_params),
            d_minus=make_coefficient(dm_kind, **dm_params),
            reaction=make_reaction(r_kind, **r_params),
            u0=make_initial(u_kind, **u_params),
            endpoint_tolerance=float(config.get("endpoint_tolerance", ENDPOINT_TOLERANCE)),
        )
    except TypeError as exc:
        # unexpected keyword in params
        raise ValidationError(f"invalid registry parameters: {exc}") from None
