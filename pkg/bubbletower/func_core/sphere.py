"""Geometry of the round unit sphere: frames, distances, grids."""
import math
import typing

import numpy as np
from scipy.special import gammaln, roots_jacobi


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)"""
    return float(
        math.exp(math.log(2.0) + ((n + 1) / 2) * math.log(math.pi) - gammaln((n + 1) / 2))
    )


def normalize(points: np.ndarray) -> np.ndarray:
    """Project nonzero vectors radially onto the sphere"""
    points = np.asarray(points, dtype=float)
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def geodesic_distance(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Great-circle distance, accurate for nearby points"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    chord = np.linalg.norm(p - q, axis=-1)
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


def pairwise_geodesic(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    chord = np.linalg.norm(diff, axis=-1)
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


def tangent_frames(points: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal tangent frames, shape (N, n+1, n).

    Uses the Householder reflection that maps p to a signed basis vector
    e_j with j = argmax |p_j|. The remaining columns of the reflection span
    the tangent space at p.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    num_points, dim = points.shape
    pivot = np.argmax(np.abs(points), axis=1)
    sign = np.where(points[np.arange(num_points), pivot] >= 0, 1.0, -1.0)

    v = points.copy()
    v[np.arange(num_points), pivot] -= sign
    v_norm_sq = np.einsum("ij,ij->i", v, v)

    reflections = np.broadcast_to(np.eye(dim), (num_points, dim, dim)).copy()
    moved = v_norm_sq > 1e-30
    reflections[moved] -= (
        2.0
        * v[moved, :, None]
        * v[moved, None, :]
        / v_norm_sq[moved, None, None]
    )

    keep = np.ones((num_points, dim), dtype=bool)
    keep[np.arange(num_points), pivot] = False
    frames = reflections.transpose(0, 2, 1)[keep].reshape(num_points, dim - 1, dim)

    return frames.transpose(0, 2, 1)


def tangent_projection(points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """P_T v = v - <v, p> p"""
    radial = np.einsum("...i,...i->...", vectors, points)
    return vectors - radial[..., None] * points


def fibonacci_sphere(num_points: int) -> np.ndarray:
    """Quasi-uniform points on S^2"""
    k = np.arange(num_points, dtype=float) + 0.5
    z = 1.0 - 2.0 * k / num_points
    golden_angle = math.pi * (3.0 - math.sqrt(5.0))
    phi = golden_angle * k
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))

    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def product_grid(
    n: int, nodes_per_angle: int
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Tensor product Gauss-Jacobi grid in hyperspherical coordinates.

    Each polar angle of an S^m factor (m >= 2) gets the Gauss-Jacobi rule for
    the weight (1 - s^2)^((m - 2) / 2) in s = cos(theta). The final circle
    gets 2 * nodes_per_angle equally spaced azimuths.

    Returns points (N, n+1) and weights (N,) summing to vol(S^n).
    """
    circle_count = 2 * nodes_per_angle
    phi = 2.0 * math.pi * (np.arange(circle_count) + 0.5) / circle_count
    points = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    weights = np.full(circle_count, 2.0 * math.pi / circle_count)

    for m in range(2, n + 1):
        alpha = (m - 2) / 2.0
        s, w = roots_jacobi(nodes_per_angle, alpha, alpha)
        sin_part = np.sqrt(np.clip(1.0 - s * s, 0.0, 1.0))

        # x = (s, sqrt(1 - s^2) * y) for y on S^(m-1)
        new_points = np.concatenate(
            [
                np.repeat(s, len(points))[:, None],
                np.repeat(sin_part, len(points))[:, None]
                * np.tile(points, (len(s), 1)),
            ],
            axis=1,
        )
        weights = np.repeat(w, len(weights)) * np.tile(weights, len(s))
        points = new_points

    return points, weights


def geodesic_ball_samples(
    center: np.ndarray, radius: float, num_radii: int = 12, nodes_per_angle: int = 4
) -> np.ndarray:
    """Points on geodesic spheres of radii 0..radius about center"""
    center = normalize(center)
    n = center.shape[0] - 1
    frame = tangent_frames(center[None, :])[0]

    # Unit directions in the tangent space (S^(n-1) grid)
    directions, _ = product_grid(n - 1, nodes_per_angle)
    tangents = directions @ frame.T

    samples = [center[None, :]]
    for r in np.linspace(0.0, radius, num_radii)[1:]:
        samples.append(np.cos(r) * center[None, :] + np.sin(r) * tangents)

    return np.concatenate(samples, axis=0)
