"""
Discrete two-sided fractional diffusion operator.

The semi-discrete system reads du/dt + A u = f(u) with

    A = eta * (GL+ D+ GR+  +  GL- D- GR-),   eta = h^(-2 alpha)

where G~ is the (N-1)x(N-1) lower-triangular Toeplitz matrix of g_0..g_{N-2}:

    GL+ = [a+ | G~]            (N-1) x N,  a+ = -(a_0, ..., a_{N-2})
    GR+ = [g+ | G~]^T          N x (N-1),  g+ = (g_1, ..., g_{N-1})
    GL- = [G~^T | a-]          (N-1) x N,  a- = -(a_{N-2}, ..., a_0)
    GR- = [G~ ; g-^T]          N x (N-1),  g- = (g_{N-1}, ..., g_1)

D+ = diag(d+(x_0..x_{N-1})) and D- = diag(d-(x_1..x_N)). With u(a) = u(b) = 0
the Caputo and Riemann-Liouville forms agree, so no boundary correction
appears.

`apply_direct` evaluates the same operator by literal summation and is the
oracle the assembled matrix is tested against.

Complexity:
- assemble_operator: O(N^3) for the two dense products, O(N^2) memory.
- apply_direct: O(N^3) per application.
"""

import logging
import math
import sys
from typing import Dict, Union

import numpy as np
from scipy.linalg import toeplitz

from .coefficients import coeff_table
from .errors import NumericalError, ShapeError
from .models import CoeffTable, DiffusionSamples, FractionalOrder, Grid, Operator

logger = logging.getLogger(__name__)

_LOG_MAX = math.log(sys.float_info.max)


def scaling_factor(h: float, alpha: Union[float, FractionalOrder]) -> float:
    """eta = h^(-2 alpha), refusing values that overflow double precision."""
    order = FractionalOrder.coerce(alpha)
    log_eta = -2.0 * order.value * math.log(h)
    if log_eta >= _LOG_MAX:
        raise NumericalError(
            f"eta = h^(-2 alpha) overflows for h={h:g}, alpha={order.value:g}"
        )
    return h ** (-2.0 * order.value)


def caputo_l1_left(u: np.ndarray, table: CoeffTable, h: float) -> np.ndarray:
    """Left Caputo derivative at x_1..x_{N-1} by the L1 formula.

    Entry i is h^-alpha [a_0 u_i - sum_{k=1}^{i-1} (a_{i-k-1} - a_{i-k}) u_k
    - a_{i-1} u_0] with the table's normalized weights.

    Args:
        u: the N+1 nodal values u_0..u_N.
        table: coefficient table with at least N weights.
        h: grid spacing.

    Returns:
        Vector of N-1 derivative values.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 3:
        raise ShapeError(f"need at least 3 nodal values, got shape {u.shape}")
    N = u.size - 1
    if table.n < N:
        raise ShapeError(f"table has {table.n} weights, need at least {N}")
    a = table.a
    out = np.empty(N - 1)
    for i in range(1, N):
        # weights a_{i-k-1} - a_{i-k} for k = 1..i-1, i.e. m = i-k = i-1..1
        m = np.arange(i - 1, 0, -1)
        history = np.dot(a[m - 1] - a[m], u[1:i]) if i > 1 else 0.0
        out[i - 1] = a[0] * u[i] - history - a[i - 1] * u[0]
    return out * h ** (-table.alpha.value)


def operator_blocks(table: CoeffTable, N: int) -> Dict[str, np.ndarray]:
    """The Toeplitz factor G~ and the four boundary-bordered blocks."""
    if table.n < N:
        raise ShapeError(f"table has {table.n} weights, need at least {N}")
    a, g = table.a[:N], table.g[:N]
    first_row = np.zeros(N - 1)
    first_row[0] = g[0]
    g_tilde = toeplitz(g[: N - 1], first_row)

    a_plus = -a[: N - 1]
    a_minus = -a[N - 2 :: -1]
    g_plus = g[1:N]
    g_minus = g[N - 1 : 0 : -1]

    return {
        "G_tilde": g_tilde,
        "G_L_plus": np.column_stack([a_plus, g_tilde]),
        "G_R_plus": np.vstack([g_plus, g_tilde.T]),
        "G_L_minus": np.column_stack([g_tilde.T, a_minus]),
        "G_R_minus": np.vstack([g_tilde, g_minus]),
    }


def assemble_operator(
    grid: Grid,
    alpha: Union[float, FractionalOrder],
    coeffs: DiffusionSamples,
    keep_blocks: bool = False,
) -> Operator:
    """Assemble the dense (N-1)x(N-1) operator A.

    Args:
        grid: spatial grid with N intervals.
        alpha: fractional order.
        coeffs: diffusion samples of length N.
        keep_blocks: retain G~ and the four blocks on the result (tests use this).

    Returns:
        Immutable Operator.
    """
    order = FractionalOrder.coerce(alpha)
    N = grid.N
    if coeffs.N != N:
        raise ShapeError(f"diffusion samples have length {coeffs.N}, grid has N={N}")

    eta = scaling_factor(grid.h, order)
    blocks = operator_blocks(coeff_table(order, N), N)

    # G D G' with D diagonal: scale the columns of the left factor
    plus = (blocks["G_L_plus"] * coeffs.d_plus) @ blocks["G_R_plus"]
    minus = (blocks["G_L_minus"] * coeffs.d_minus) @ blocks["G_R_minus"]
    A = eta * (plus + minus)
    if not np.all(np.isfinite(A)):
        raise NumericalError("assembled operator has non-finite entries")
    A.setflags(write=False)

    logger.debug("assembled operator N=%d alpha=%.4f eta=%.6e", N, order.value, eta)
    return Operator(
        A=A,
        eta=eta,
        alpha=order,
        grid=grid,
        blocks=blocks if keep_blocks else None,
    )


def apply_direct(
    u: np.ndarray,
    grid: Grid,
    alpha: Union[float, FractionalOrder],
    coeffs: DiffusionSamples,
) -> np.ndarray:
    """Apply the operator to interior values by literal summation.

    Args:
        u: interior values u_1..u_{N-1}.
        grid: spatial grid.
        alpha: fractional order.
        coeffs: diffusion samples of length N.

    Returns:
        Vector of N-1 values equal to A u.
    """
    order = FractionalOrder.coerce(alpha)
    N = grid.N
    u_in = np.asarray(u, dtype=float)
    if u_in.shape != (N - 1,):
        raise ShapeError(f"expected {N - 1} interior values, got shape {u_in.shape}")
    if coeffs.N != N:
        raise ShapeError(f"diffusion samples have length {coeffs.N}, grid has N={N}")

    table = coeff_table(order, N)
    a, g = table.a, table.g
    eta = scaling_factor(grid.h, order)
    dp = coeffs.d_plus  # d_{+,0..N-1}
    dm = np.concatenate([[0.0], coeffs.d_minus])  # d_{-,i} at index i
    # nodal vector with u_0 = u_N = 0
    v = np.zeros(N + 1)
    v[1:N] = u_in

    out = np.zeros(N - 1)
    for i in range(1, N):
        total = 0.0
        for s in range(0, i):
            inner = 0.0
            for k in range(0, N - i + s):
                inner += g[k] * v[i - s + k]
            total += g[s] * dp[i - s] * inner
        tail = 0.0
        for k in range(1, N):
            tail += g[k] * v[k]
        total -= a[i - 1] * dp[0] * tail

        for s in range(0, N - i):
            inner = 0.0
            for k in range(0, i + s):
                inner += g[k] * v[i + s - k]
            total += g[s] * dm[i + s] * inner
        tail = 0.0
        for k in range(1, N):
            tail += g[k] * v[N - k]
        total -= a[N - 1 - i] * dm[N] * tail

        out[i - 1] = eta * total
    return out
