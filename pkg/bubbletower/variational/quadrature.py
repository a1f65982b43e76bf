"""Quadrature rules on S^n with an optional on-disk cache."""
import logging
import math
import typing
from pathlib import Path

import numpy as np

from bubbletower.func_core.sphere import normalize, product_grid, tangent_frames

from .const import MAX_DIMENSION, MIN_DIMENSION, QuadratureError, QuadratureRule

_LOGGER = logging.getLogger(__name__)


def _check_dimension(n: int, level: int):
    if not MIN_DIMENSION <= n <= MAX_DIMENSION:
        raise QuadratureError(
            f"Quadrature supports n in [{MIN_DIMENSION}, {MAX_DIMENSION}] (got {n})"
        )

    if level < 1:
        raise QuadratureError(f"Quadrature level must be >= 1 (got {level})")


def build_quadrature(
    n: int, level: int, cache_dir: typing.Optional[typing.Union[str, Path]] = None
) -> QuadratureRule:
    """Product Gauss rule exact for ambient polynomials of degree <= 2 * level"""
    _check_dimension(n, level)

    cache_path: typing.Optional[Path] = None
    if cache_dir is not None:
        cache_path = Path(cache_dir) / "quadrature" / f"n{n}_level{level}.npz"
        if cache_path.is_file():
            _LOGGER.debug("Quadrature cache hit: %s", cache_path)
            with np.load(cache_path) as cached:
                return QuadratureRule(
                    n=n,
                    points=cached["points"],
                    weights=cached["weights"],
                    level=level,
                )

        _LOGGER.debug("Quadrature cache miss: %s", cache_path)

    points, weights = product_grid(n, level + 1)
    _LOGGER.debug("Built product rule on S^%s with %s point(s)", n, len(weights))

    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = cache_path.with_name(cache_path.stem + ".tmp.npz")
        np.savez(temp_path, points=points, weights=weights)
        temp_path.replace(cache_path)

    return QuadratureRule(n=n, points=points, weights=weights, level=level)


def max_concentration(level: int) -> float:
    """Largest lambda the bubble rule resolves at a level"""
    return 1000.0 * level


def bubble_quadrature(
    center: np.ndarray,
    concentration: float,
    level: int,
    step_scale: float = 1.0,
) -> QuadratureRule:
    """Rule adapted to functions concentrated at center.

    Uses x = -tanh(r) a + sech(r) w, so tan(theta / 2) = e^r for the angle
    theta to a. The trapezoid rule in r runs over [-ln(lambda) - R, R] and
    w carries the product rule of S^(n-1) in the tangent space at a.
    """
    center = normalize(np.asarray(center, dtype=float))
    n = center.shape[0] - 1
    _check_dimension(n, level)

    if concentration < 1:
        raise QuadratureError(f"Concentration must be >= 1 (got {concentration})")

    if concentration > max_concentration(level):
        raise QuadratureError(
            f"Concentration {concentration} exceeds {max_concentration(level)} "
            f"at quadrature level {level}"
        )

    # Tail where sech(r)^n drops below e^-39
    tail = 39.0 / n + 1.0
    step = step_scale * 2.0 / (level + 2)
    r_start = -math.log(concentration) - tail
    num_steps = int(math.ceil((tail - r_start) / step))
    radii = r_start + step * np.arange(num_steps + 1)

    directions, direction_weights = product_grid(n - 1, level + 1)
    frame = tangent_frames(center[None, :])[0]
    tangents = directions @ frame.T

    cos_part = -np.tanh(radii)
    sin_part = 1.0 / np.cosh(radii)

    points = (
        cos_part[:, None, None] * center[None, None, :]
        + sin_part[:, None, None] * tangents[None, :, :]
    ).reshape(-1, n + 1)
    weights = (
        (step * sin_part**n)[:, None] * direction_weights[None, :]
    ).reshape(-1)

    _LOGGER.debug(
        "Built bubble rule on S^%s (lambda=%s) with %s point(s)",
        n,
        concentration,
        len(weights),
    )

    return QuadratureRule(
        n=n, points=normalize(points), weights=weights, level=level, kind="bubble"
    )
