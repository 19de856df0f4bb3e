"""
Dense matrix exponential by scaling and squaring with diagonal Pade approximants.

The Pade degree m in {3, 5, 7, 9, 13} is the smallest whose 1-norm threshold
theta_m covers ||M||_1; above theta_13 the matrix is scaled by 2^-s, the degree
13 approximant is formed and squared s times. The thresholds bound the
backward error by the unit roundoff of double precision.

The denominator V - U is factored with partial pivoting; a singular factor is
reported instead of being solved through.
"""

import logging
import math
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import NumericalError, ShapeError, ValidationError
from .models import Operator, Propagator

logger = logging.getLogger(__name__)

_THETA: Dict[int, float] = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_PADE_COEF: Dict[int, Tuple[float, ...]] = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ),
    13: (
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ),
}


def _pade_terms(M: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Odd part U and even part V of the degree-m Pade numerator."""
    b = _PADE_COEF[m]
    n = M.shape[0]
    ident = np.eye(n)
    M2 = M @ M
    if m == 13:
        M4 = M2 @ M2
        M6 = M2 @ M4
        U = M @ (
            M6 @ (b[13] * M6 + b[11] * M4 + b[9] * M2)
            + b[7] * M6
            + b[5] * M4
            + b[3] * M2
            + b[1] * ident
        )
        V = (
            M6 @ (b[12] * M6 + b[10] * M4 + b[8] * M2)
            + b[6] * M6
            + b[4] * M4
            + b[2] * M2
            + b[0] * ident
        )
        return U, V

    powers = [ident, M2]
    for _ in range(2, (m + 1) // 2):
        powers.append(powers[-1] @ M2)
    U_inner = np.zeros_like(M)
    V = np.zeros_like(M)
    for j in range(m, 0, -2):
        U_inner += b[j] * powers[j // 2]
    for j in range(m - 1, -1, -2):
        V += b[j] * powers[j // 2]
    return M @ U_inner, V


def _solve_pade(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Solve (V - U) X = (V + U)."""
    lu, piv = lu_factor(V - U, check_finite=False)
    diag = np.abs(np.diag(lu))
    if diag.size and (not np.all(np.isfinite(diag)) or diag.min() == 0.0):
        raise NumericalError("Pade denominator is singular")
    return lu_solve((lu, piv), V + U, check_finite=False)


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential of a dense square real matrix.

    Args:
        M: square matrix with finite entries.

    Returns:
        exp(M) as a new array.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expm needs a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("expm needs finite entries")
    if M.shape[0] == 0:
        return np.zeros_like(M)

    norm = float(np.linalg.norm(M, 1))
    for m in (3, 5, 7, 9):
        if norm <= _THETA[m]:
            logger.debug("expm n=%d norm=%.3e degree=%d", M.shape[0], norm, m)
            return _solve_pade(*_pade_terms(M, m))

    s = 0
    if norm > _THETA[13]:
        s = max(0, int(math.ceil(math.log2(norm / _THETA[13]))))
    logger.debug("expm n=%d norm=%.3e degree=13 squarings=%d", M.shape[0], norm, s)
    X = _solve_pade(*_pade_terms(M / 2.0**s, 13))
    for _ in range(s):
        X = X @ X
    if not np.all(np.isfinite(X)):
        raise NumericalError("matrix exponential overflowed")
    return X


def propagator(op: Operator, tau: float) -> Propagator:
    """exp(-A*tau) for one time step of length tau."""
    tau = float(tau)
    if not np.isfinite(tau) or tau <= 0:
        raise ValidationError(f"time step must be > 0, got {tau!r}")
    E = expm(-tau * op.A)
    E.setflags(write=False)
    return Propagator(E=E, tau=tau)
