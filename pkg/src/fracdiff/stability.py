"""
Linear stability of IIF2 on the scalar model u_t = -q u + r u, q > 0.

With lambda = r*tau and u^j = e^{i j theta} the scheme gives

    e^{i theta} = e^{-q tau} (1 + lambda/2) + lambda e^{i theta} / 2

so the boundary of the stability region, traced over theta in [0, 2 pi], is

    lambda_r = 2 (1 - e^{-2 q tau}) / c,   lambda_i = 4 sin(theta) e^{-q tau} / c
    c(q tau, theta) = (1 - e^{-q tau})^2 + 2 (1 + cos theta) e^{-q tau}

The stable set is the exterior of the curve. lambda_r > 0 along the whole
curve, so the left half-plane is always stable.
"""

import cmath
import logging
import math
from typing import List

import numpy as np

from .config import DEFAULT_THETA_SAMPLES
from .errors import ValidationError
from .models import StabilityCurve, StabilityPoint

logger = logging.getLogger(__name__)

_TWO_PI = 2.0 * math.pi


def _check_q_tau(q_tau: float) -> float:
    q_tau = float(q_tau)
    if not math.isfinite(q_tau) or q_tau <= 0:
        raise ValidationError(f"q*tau must be > 0, got {q_tau!r}")
    return q_tau


def boundary_point(q_tau: float, theta: float) -> StabilityPoint:
    """Point of the stability boundary at angle theta."""
    q_tau = _check_q_tau(q_tau)
    theta = float(theta)
    # 2*pi wraps to 0 exactly so the curve closes on itself
    phase = math.fmod(theta, _TWO_PI)
    decay = math.exp(-q_tau)
    c = (-math.expm1(-q_tau)) ** 2 + 2.0 * (1.0 + math.cos(phase)) * decay
    lambda_r = -2.0 * math.expm1(-2.0 * q_tau) / c
    lambda_i = 4.0 * math.sin(phase) * decay / c
    return StabilityPoint(theta=theta, q_tau=q_tau, lambda_r=lambda_r, lambda_i=lambda_i, c=c)


def boundary_curve(q_tau: float, samples: int = DEFAULT_THETA_SAMPLES) -> StabilityCurve:
    """Closed boundary curve on samples+1 uniform angles over [0, 2 pi]."""
    q_tau = _check_q_tau(q_tau)
    if int(samples) != samples or samples < 8:
        raise ValidationError(f"samples must be an integer >= 8, got {samples!r}")
    thetas = np.linspace(0.0, _TWO_PI, int(samples) + 1)
    points: List[StabilityPoint] = [boundary_point(q_tau, t) for t in thetas]
    logger.debug("stability curve q_tau=%g with %d points", q_tau, len(points))
    return StabilityCurve(q_tau=q_tau, points=points)


def closed_form_lambda(q_tau: float, theta: float) -> complex:
    """lambda = 2 (e^{i theta} - e^{-q tau}) / (e^{i theta} + e^{-q tau})."""
    q_tau = _check_q_tau(q_tau)
    z = cmath.exp(1j * math.fmod(float(theta), _TWO_PI))
    decay = math.exp(-q_tau)
    return 2.0 * (z - decay) / (z + decay)


def boundary_residual(point: StabilityPoint) -> float:
    """Modulus of the defining relation's residual at a boundary point."""
    z = cmath.exp(1j * math.fmod(point.theta, _TWO_PI))
    decay = math.exp(-point.q_tau)
    lam = point.lam
    return abs(z - decay * (1.0 + 0.5 * lam) - 0.5 * lam * z)


def amplification_factor(q_tau: float, lam: complex) -> complex:
    """Growth factor G of one step: u^{j+1} = G u^j.

    G = e^{-q tau} (1 + lambda/2) / (1 - lambda/2); lambda = 2 is the pole.
    """
    q_tau = _check_q_tau(q_tau)
    lam = complex(lam)
    if lam == 2.0:
        return complex(math.inf, 0.0)
    return math.exp(-q_tau) * (1.0 + 0.5 * lam) / (1.0 - 0.5 * lam)


def is_stable(q_tau: float, lam: complex) -> bool:
    """True when |G| <= 1."""
    return abs(amplification_factor(q_tau, lam)) <= 1.0
