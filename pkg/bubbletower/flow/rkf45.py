"""Embedded Runge-Kutta-Fehlberg 4(5) step."""
import typing

import numpy as np

# Stage times
EVAL_STAGES = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)

# Extended Butcher table; the last row propagates the 4th order solution
BUTCHER_TABLE = (
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3554 / 2565, 1859 / 4104, -11 / 40),
    (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0),
)

# Local truncation error (5th minus 4th order)
ERROR_WEIGHTS = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

ORDER = 4

RightHandSide = typing.Callable[[float, np.ndarray], np.ndarray]


def rkf45_step(
    rhs: RightHandSide, t: float, y: np.ndarray, h: float
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """One step of size h; returns (y_new, local error vector)"""
    slopes: typing.List[np.ndarray] = [rhs(t, y)]
    for stage, row in enumerate(BUTCHER_TABLE[:-1], start=1):
        increment = sum(coef * slope for coef, slope in zip(row, slopes))
        slopes.append(rhs(t + EVAL_STAGES[stage] * h, y + h * increment))

    y_new = y + h * sum(coef * slope for coef, slope in zip(BUTCHER_TABLE[-1], slopes))
    error = h * sum(coef * slope for coef, slope in zip(ERROR_WEIGHTS, slopes))

    return y_new, error


def error_ratio(error: np.ndarray, y: np.ndarray, y_new: np.ndarray, tolerance: float) -> float:
    """Max-norm of the error scaled by atol + rtol * |y| (both = tolerance)"""
    scale = tolerance * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
    return float(np.max(np.abs(error) / scale))


def next_step(h: float, ratio: float, safety: float = 0.9) -> float:
    """Step size controller clipped to [h/5, 5h]"""
    if ratio == 0:
        return 5.0 * h

    factor = safety * ratio ** (-1.0 / (ORDER + 1))
    return h * min(5.0, max(0.2, factor))
