"""Explicit Runge-Kutta steppers: classic RK4 and the Dormand-Prince 5(4) pair."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

Rhs = Callable[[float, np.ndarray], np.ndarray]

# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th and embedded 4th order weights.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


def rk4_step(f: Rhs, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def dp45_step(
    f: Rhs, t: float, y: np.ndarray, h: float, k1: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One Dormand-Prince step from (t, y) with first stage ``k1``.

    Returns the 5th-order solution, the local error estimate and the last
    stage, which equals f(t + h, y_new) and seeds the next step.
    """
    k = np.empty((7, y.size))
    k[0] = k1
    for s in range(1, 7):
        k[s] = f(t + _C[s] * h, y + h * (np.asarray(_A[s]) @ k[:s]))
    y_new = y + h * (_B5 @ k)
    err = h * (_E @ k)
    return y_new, err, k[6]


def error_norm(
    err: np.ndarray, y: np.ndarray, y_new: np.ndarray, rel_tol: float, abs_tol: float
) -> float:
    """RMS of the error scaled by abs_tol + rel_tol * max(|y|, |y_new|)."""
    if err.size == 0:
        return 0.0
    scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def step_factor(err_norm: float) -> float:
    if err_norm == 0.0:
        return MAX_FACTOR
    return float(np.clip(SAFETY * err_norm ** (-1 / 5), MIN_FACTOR, MAX_FACTOR))
