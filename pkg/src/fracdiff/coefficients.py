"""
L1 weights for the Caputo derivative.

    a_i = [(i+1)^(1-alpha) - i^(1-alpha)] / Gamma(2-alpha),   i >= 0
    g_0 = a_0,  g_k = a_k - a_{k-1},                         k >= 1

Only the normalized weights are stored; the h^-alpha factor belongs to the
caller. Every discrete operator in the package is built from one table.

Complexity:
- Time: O(n) to build a table of n weights.
- Space: O(n).
"""

import logging
import math
from typing import Union

import numpy as np

from .errors import ValidationError
from .models import CoeffTable, FractionalOrder

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Below this index the direct difference of powers loses nothing
_STABLE_FROM = 16


def gamma(x: float) -> float:
    """Gamma function on (0.5, 2) via a Lanczos approximation.

    Only Gamma(2 - alpha) with alpha in (1/2, 1) is needed by the solver, so the
    reflection formula is never required.

    Args:
        x: argument in the open interval (0.5, 2).

    Returns:
        Gamma(x) with relative error below 1e-13.
    """
    x = float(x)
    if not (0.5 < x < 2.0):
        raise ValidationError(f"gamma is only provided on (0.5, 2), got {x!r}")
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def _power_differences(beta: float, n: int) -> np.ndarray:
    """(i+1)^beta - i^beta for i = 0..n-1 without cancellation at large i."""
    i = np.arange(n, dtype=float)
    out = np.empty(n)
    head = min(n, _STABLE_FROM)
    out[:head] = (i[:head] + 1.0) ** beta - i[:head] ** beta
    if n > head:
        tail = i[head:]
        # i^beta * ((1 + 1/i)^beta - 1)
        out[head:] = tail**beta * np.expm1(beta * np.log1p(1.0 / tail))
    return out


def coeff_table(alpha: Union[float, FractionalOrder], n: int) -> CoeffTable:
    """Build the normalized L1 weights a_0..a_{n-1} and g_0..g_{n-1}.

    Args:
        alpha: fractional order in (1/2, 1).
        n: number of weights, at least 1.

    Returns:
        Immutable CoeffTable.
    """
    order = FractionalOrder.coerce(alpha)
    if int(n) != n or n < 1:
        raise ValidationError(f"number of weights must be an integer >= 1, got {n!r}")
    n = int(n)

    a = _power_differences(order.beta, n) / gamma(2.0 - order.value)
    g = np.empty(n)
    g[0] = a[0]
    g[1:] = np.diff(a)

    a.setflags(write=False)
    g.setflags(write=False)
    logger.debug("coefficient table alpha=%.4f n=%d", order.value, n)
    return CoeffTable(alpha=order, a=a, g=g)
