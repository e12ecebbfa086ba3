import logging
import math
from typing import Callable

import numpy as np
from rich.pretty import pretty_repr

from specsampler.core.model import machine_epsilon, tiny
from specsampler.exception_classes import ContractViolationException, NotAnEigenvalueException
from specsampler.tridiag.model import TridiagMatrix

logger = logging.getLogger('App.Tridiag')

RESIDUAL_THRESHOLD = 1e-8
MAX_BISECTION_STEPS = 200


def sturm_pivots(m: TridiagMatrix, x: float) -> np.ndarray:
    """
    Pivots of the LDL^T factorisation of ``m - x``.

    Pivots smaller in magnitude than ``eps * scale`` are replaced by that value with their sign kept,
    an exact zero counting as positive. The scale is taken row by row from ``|q_k - x|`` and the
    adjacent off-diagonal entries, so that one huge boundary entry does not flatten the pivots of
    the other rows. The count of negative pivots is then the number of eigenvalues strictly less
    than ``x``.

    Args:
        m: The matrix.
        x: The shift.

    Returns:
        The N pivots.
    """
    diag = m.diag.tolist()
    offdiag = m.offdiag.tolist()
    squares = (m.offdiag ** 2).tolist()
    pivots = [0.0] * m.size
    previous = 1.0
    for k in range(m.size):
        value = diag[k] - x
        if k > 0:
            value -= squares[k - 1] / previous
        row_scale = abs(diag[k] - x) + (offdiag[k - 1] if k > 0 else 0.0) + \
            (offdiag[k] if k < m.size - 1 else 0.0)
        pivot_floor = machine_epsilon * row_scale if row_scale > 0 else tiny
        if abs(value) < pivot_floor:
            value = -pivot_floor if value < 0 else pivot_floor
        pivots[k] = value
        previous = value
    return np.array(pivots)


def sturm_count(m: TridiagMatrix, x: float) -> int:
    """
    Returns the number of eigenvalues of ``m`` strictly less than ``x``.
    """
    return int(np.count_nonzero(sturm_pivots(m, x) < 0))


def bisect_eigenvalues(count: Callable[[float], int], n: int, lo: float, hi: float, tol: float) -> np.ndarray:
    """
    Bisection on an eigenvalue counting function.

    Each eigenvalue is bracketed independently until the bracket is narrower than ``tol`` or
    than a few ulps of its own magnitude, whichever is larger, so that huge brackets do not
    spoil the accuracy of small eigenvalues.

    Args:
        count: Number of eigenvalues strictly below a point.
        n: Number of eigenvalues inside ``[lo, hi]``.
        lo: Lower bound with ``count(lo) == 0``.
        hi: Upper bound with ``count(hi) == n``.
        tol: Absolute bracket width.

    Returns:
        The n bracket midpoints in increasing order.
    """
    values = np.empty(n)
    for k in range(n):
        left, right = lo, hi
        for _ in range(MAX_BISECTION_STEPS):
            width = max(tol, 2 * machine_epsilon * max(abs(left), abs(right)))
            if right - left <= width:
                break
            middle = 0.5 * (left + right)
            if middle <= left or middle >= right:
                break
            if count(middle) > k:
                right = middle
            else:
                left = middle
        values[k] = 0.5 * (left + right)
    return values


def newton_correction(m: TridiagMatrix, x: float) -> float:
    """
    Newton step ``-det(m - x) / det'(m - x)`` evaluated through the pivot ratios.
    """
    pivots = sturm_pivots(m, x)
    squares = m.offdiag ** 2
    derivative = -1.0
    log_derivative = derivative / pivots[0]
    for k in range(1, m.size):
        derivative = -1.0 + squares[k - 1] * derivative / pivots[k - 1] ** 2
        log_derivative += derivative / pivots[k]
    if log_derivative == 0 or not math.isfinite(log_derivative):
        return 0.0
    return -1.0 / log_derivative


def eigenvalues(m: TridiagMatrix, tol: float = 1e-14) -> np.ndarray:
    """
    All eigenvalues of ``m`` by Sturm bisection and one Newton polish step.

    Args:
        m: The matrix.
        tol: Bracket width before polishing.

    Returns:
        Strictly increasing eigenvalues.

    Raises:
        ContractViolationException: If ``tol`` is not positive.
    """
    if tol <= 0:
        raise ContractViolationException(f'Tolerance must be positive, got {tol}')

    lo, hi = m.gershgorin_bounds()
    pad = 4 * m.size * machine_epsilon * max(abs(lo), abs(hi), m.scale)
    lo, hi = lo - pad, hi + pad
    logger.debug(f'Bisection bracket [{lo}, {hi}] for N={m.size}')

    values = bisect_eigenvalues(lambda x: sturm_count(m, x), m.size, lo, hi, tol)

    for k, value in enumerate(values):
        step = newton_correction(m, value)
        width = max(tol, 2 * machine_epsilon * abs(value))
        if abs(step) <= width:
            values[k] = value + step

    logger.debug(f'Eigenvalues {pretty_repr(values.tolist())}')
    return values


def eigvec_by_recurrence(m: TridiagMatrix, x: float) -> np.ndarray:
    """
    Unnormalised eigenvector ``(P_0(x), ..., P_{N-1}(x))`` from the three-term recurrence.

    Args:
        m: The matrix.
        x: An eigenvalue of ``m``.

    Returns:
        The eigenvector with first component 1.

    Raises:
        NotAnEigenvalueException: If the relative residual exceeds 1e-8.
    """
    vector = np.empty(m.size)
    vector[0] = 1.0
    if m.size > 1:
        vector[1] = (x - m.diag[0]) / m.offdiag[0]
    for k in range(1, m.size - 1):
        vector[k + 1] = ((x - m.diag[k]) * vector[k] - m.offdiag[k - 1] * vector[k - 1]) / m.offdiag[k]

    residual = np.linalg.norm(m.apply(vector) - x * vector) / np.linalg.norm(vector)
    if residual > RESIDUAL_THRESHOLD * max(1.0, m.scale):
        raise NotAnEigenvalueException(f'{x} is not an eigenvalue, relative residual {residual:.3e}')
    return vector
