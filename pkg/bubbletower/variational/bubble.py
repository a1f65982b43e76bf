"""Bubble profiles on the round sphere.

phi(x) = c * (2 lam / ((lam^2 + 1) - (lam^2 - 1) <a, x>))^((n - 2) / 2)

with c = (n(n-1))^((n-2)/4) solves L phi = phi^((n+2)/(n-2)) exactly for the
conformal Laplacian L = -c_n Laplacian + n(n-1).
"""
import typing

import numpy as np

from bubbletower.func_core.sphere import normalize

from .const import Bubble, EnergyError, conformal_constant, scalar_curvature


def bubble(center: np.ndarray, concentration: float, n: int) -> Bubble:
    """Bubble at center; concentration 1 is the constant solution"""
    center = normalize(np.asarray(center, dtype=float))
    if center.shape != (n + 1,):
        raise EnergyError(f"Center must lie in R^{n + 1} (got shape {center.shape})")

    if n < 3:
        raise EnergyError(f"Bubbles need n >= 3 (got {n})")

    if concentration < 1:
        raise EnergyError(f"Concentration must be >= 1 (got {concentration})")

    return Bubble(center=center, concentration=float(concentration), n=n)


def profile(
    b: Bubble, cosines: np.ndarray
) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """phi, phi' and phi'' as functions of s = <a, x>"""
    lam = b.concentration
    p = b.exponent
    scale = b.amplitude * (2.0 * lam) ** p
    spread = lam * lam - 1.0
    denominator = (lam * lam + 1.0) - spread * np.asarray(cosines, dtype=float)

    phi = scale * denominator ** (-p)
    phi_1 = scale * p * spread * denominator ** (-p - 1.0)
    phi_2 = scale * p * (p + 1.0) * spread * spread * denominator ** (-p - 2.0)

    return phi, phi_1, phi_2


def bubble_values(b: Bubble, points: np.ndarray) -> np.ndarray:
    return profile(b, np.atleast_2d(points) @ b.center)[0]


def bubble_gradient(b: Bubble, points: np.ndarray) -> np.ndarray:
    """phi'(s) (a - s x) as ambient tangent vectors"""
    points = np.atleast_2d(points)
    cosines = points @ b.center
    _, phi_1, _ = profile(b, cosines)
    return phi_1[:, None] * (b.center[None, :] - cosines[:, None] * points)


def bubble_laplacian(b: Bubble, points: np.ndarray) -> np.ndarray:
    """phi''(s)(1 - s^2) - n s phi'(s)"""
    cosines = np.atleast_2d(points) @ b.center
    _, phi_1, phi_2 = profile(b, cosines)
    return phi_2 * (1.0 - cosines * cosines) - b.n * cosines * phi_1


def bubble_residual(b: Bubble, points: np.ndarray) -> float:
    """max |L phi - phi^((n+2)/(n-2))| / phi^((n+2)/(n-2))"""
    n = b.n
    phi = bubble_values(b, points)
    conformal = -conformal_constant(n) * bubble_laplacian(b, points)
    conformal += scalar_curvature(n) * phi
    power = phi ** ((n + 2.0) / (n - 2.0))

    return float(np.max(np.abs(conformal - power) / power))
