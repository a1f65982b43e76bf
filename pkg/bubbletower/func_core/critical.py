# Copyright 2022 Michael Hansen
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

import logging
import math
import typing
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from bubbletower.const import InputError

from .candidate import CandidateFunction, validate_positive
from .const import (
    AdmissibilityReport,
    CandidateError,
    CriticalPoint,
    CriticalPointError,
    DegeneracyError,
    Tolerances,
)
from .sphere import (
    fibonacci_sphere,
    normalize,
    pairwise_geodesic,
    product_grid,
    tangent_frames,
)

_LOGGER = logging.getLogger(__name__)


@dataclass
class CriticalSearch:
    """Outcome of projected Newton from every seed"""

    points: typing.List[CriticalPoint]
    """Merged, classified critical points, sorted by value descending"""

    unconverged: np.ndarray = field(repr=False)
    """Seeds (M, n+1) that did not reach the gradient tolerance"""

    num_seeds: int = 0


def seed_points(n: int, grid_resolution: int) -> np.ndarray:
    """Deterministic quasi-uniform seeds on S^n"""
    if grid_resolution < 1:
        raise InputError(f"Grid resolution must be >= 1 (got {grid_resolution})")

    if n == 2:
        seeds = fibonacci_sphere(2 * grid_resolution * grid_resolution)
    else:
        seeds, _ = product_grid(n, grid_resolution)

    min_seeds = math.ceil(10 ** (n / 2))
    if len(seeds) < min_seeds:
        raise InputError(
            f"Grid resolution {grid_resolution} gives {len(seeds)} seeds on S^{n}; "
            f"at least {min_seeds} are required"
        )

    return seeds


def newton_refine(
    candidate: CandidateFunction,
    seeds: np.ndarray,
    tolerances: typing.Optional[Tolerances] = None,
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Vectorized projected Newton on the sphere.

    Returns refined points and a converged mask.
    """
    tolerances = tolerances or Tolerances()
    points = normalize(np.array(seeds, dtype=float))
    converged = np.zeros(len(points), dtype=bool)
    active = np.ones(len(points), dtype=bool)
    eye = np.eye(candidate.n)

    for _step in range(tolerances.max_newton_steps + 1):
        if not np.any(active):
            break

        current = points[active]
        frames = tangent_frames(current)
        jet = candidate.jet(current, order=2)
        assert (jet.gradient is not None) and (jet.hessian is not None)

        finite = (
            np.isfinite(jet.value)
            & np.all(np.isfinite(jet.gradient), axis=1)
            & np.all(np.isfinite(jet.hessian), axis=(1, 2))
        )

        tangent_gradient = np.einsum("iaj,ia->ij", frames, jet.gradient)
        radial = np.einsum("ij,ij->i", jet.gradient, current)
        hessian = np.einsum("iaj,iab,ibk->ijk", frames, jet.hessian, frames)
        hessian -= radial[:, None, None] * eye[None, :, :]

        gradient_norm = np.linalg.norm(tangent_gradient, axis=1)
        done = finite & (gradient_norm < tolerances.gradient)

        active_indexes = np.flatnonzero(active)
        converged[active_indexes[done]] = True
        active[active_indexes[done | (~finite)]] = False

        moving = finite & (~done)
        if not np.any(moving):
            break

        # Least-squares Newton step in tangent coordinates
        steps = -np.einsum(
            "ijk,ik->ij",
            np.linalg.pinv(hessian[moving]),
            tangent_gradient[moving],
        )
        step_norm = np.linalg.norm(steps, axis=1)
        scale = np.minimum(1.0, tolerances.max_step / np.maximum(step_norm, 1e-300))
        steps *= scale[:, None]

        ambient_steps = np.einsum("iaj,ij->ia", frames[moving], steps)
        moved_indexes = active_indexes[moving]
        points[moved_indexes] = normalize(current[moving] + ambient_steps)

    return points, converged


def classify_point(
    candidate: CandidateFunction,
    location: np.ndarray,
    tolerances: typing.Optional[Tolerances] = None,
) -> CriticalPoint:
    """Morse data at a converged point; raises DegeneracyError"""
    tolerances = tolerances or Tolerances()
    location = normalize(location)
    frame = tangent_frames(location[None, :])[0]

    jet = candidate.jet(location[None, :], order=2)
    assert (jet.gradient is not None) and (jet.hessian is not None)
    gradient = jet.gradient[0]
    radial = float(gradient @ location)

    hessian = frame.T @ jet.hessian[0] @ frame - radial * np.eye(candidate.n)
    hessian = 0.5 * (hessian + hessian.T)
    eigenvalues, eigenvectors = np.linalg.eigh(hessian)
    laplacian = float(np.trace(hessian))
    gradient_norm = float(np.linalg.norm(frame.T @ gradient))

    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    threshold = tolerances.degeneracy * scale
    if float(np.min(np.abs(eigenvalues))) < threshold:
        raise DegeneracyError(
            f"Degenerate critical point at {location.tolist()} "
            f"(Hessian eigenvalues {eigenvalues.tolist()})",
            location=location,
        )

    if abs(laplacian) < threshold:
        raise DegeneracyError(
            f"Laplacian vanishes at critical point {location.tolist()} ({laplacian})",
            location=location,
        )

    return CriticalPoint(
        location=location,
        value=float(jet.value[0]),
        morse_index=int(np.sum(eigenvalues < 0)),
        laplacian=laplacian,
        hessian_eigenvalues=eigenvalues,
        hessian_eigenvectors=frame @ eigenvectors,
        gradient_norm=gradient_norm,
    )


def merge_points(points: np.ndarray, merge_tolerance: float) -> typing.List[int]:
    """Indexes of one representative per cluster of nearby points"""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))

    distances = pairwise_geodesic(points)
    rows, cols = np.nonzero(np.triu(distances < merge_tolerance, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))

    return sorted(min(component) for component in nx.connected_components(graph))


def search_critical_points(
    candidate: CandidateFunction,
    grid_resolution: int,
    tolerances: typing.Optional[Tolerances] = None,
) -> CriticalSearch:
    """Newton from every seed, merge duplicates, classify"""
    tolerances = tolerances or Tolerances()
    seeds = seed_points(candidate.n, grid_resolution)
    _LOGGER.debug("Searching critical points from %s seed(s)", len(seeds))

    refined, converged = newton_refine(candidate, seeds, tolerances)
    unconverged = seeds[~converged]
    if len(unconverged) > 0:
        _LOGGER.warning("%s seed(s) did not converge", len(unconverged))
        for seed in unconverged:
            _LOGGER.debug("Newton did not converge from seed %s", seed.tolist())

    found = refined[converged]
    if len(found) == 0:
        raise CriticalPointError(f"No seed converged for '{candidate.text}'")

    representatives = merge_points(found, tolerances.merge)
    points = [classify_point(candidate, found[i], tolerances) for i in representatives]
    points.sort(key=lambda p: (-p.value, p.location.tolist()))

    morse_indexes = {p.morse_index for p in points}
    if (0 not in morse_indexes) or (candidate.n not in morse_indexes):
        raise CriticalPointError(
            f"Catalog of '{candidate.text}' lacks a minimum or a maximum "
            f"(indices {sorted(morse_indexes)})"
        )

    return CriticalSearch(points=points, unconverged=unconverged, num_seeds=len(seeds))


def find_critical_points(
    candidate: CandidateFunction,
    grid_resolution: int,
    tolerances: typing.Optional[Tolerances] = None,
) -> typing.List[CriticalPoint]:
    return search_critical_points(candidate, grid_resolution, tolerances).points


# -----------------------------------------------------------------------------


def morse_inequalities_hold(index_counts: typing.Mapping[int, int], n: int) -> bool:
    """Strong Morse inequalities against the Betti numbers of S^n"""
    betti = [0] * (n + 1)
    betti[0] = 1
    betti[n] += 1

    for j in range(n + 1):
        alternating_count = sum(
            ((-1) ** (j - k)) * index_counts.get(k, 0) for k in range(j + 1)
        )
        alternating_betti = sum(((-1) ** (j - k)) * betti[k] for k in range(j + 1))
        if alternating_count < alternating_betti:
            return False

    return sum(((-1) ** k) * index_counts.get(k, 0) for k in range(n + 1)) == sum(
        ((-1) ** k) * betti[k] for k in range(n + 1)
    )


def check_admissibility(
    candidate: CandidateFunction,
    critical_points: typing.Optional[typing.Sequence[CriticalPoint]] = None,
    grid_resolution: int = 6,
    tolerances: typing.Optional[Tolerances] = None,
) -> AdmissibilityReport:
    """Positivity, Morse property and gradient/Laplacian separation"""
    tolerances = tolerances or Tolerances()
    messages: typing.List[str] = []

    positive = True
    min_value = math.nan
    try:
        min_value = validate_positive(candidate)
    except CandidateError as err:
        positive = False
        messages.append(str(err))

    morse = True
    points: typing.List[CriticalPoint] = []
    if critical_points is not None:
        points = list(critical_points)
    elif positive:
        try:
            points = find_critical_points(candidate, grid_resolution, tolerances)
        except (DegeneracyError, CriticalPointError) as err:
            morse = False
            messages.append(str(err))
    else:
        morse = False

    margin = min((abs(p.laplacian) for p in points), default=0.0)
    laplacian_separated = bool(points) and all(
        abs(p.laplacian)
        >= tolerances.degeneracy * max(1.0, float(np.max(np.abs(p.hessian_eigenvalues))))
        for p in points
    )

    index_counts: typing.Dict[int, int] = {}
    for point in points:
        index_counts[point.morse_index] = index_counts.get(point.morse_index, 0) + 1

    n = candidate.n
    euler_sum = sum(((-1) ** k) * count for k, count in index_counts.items())
    euler_expected = 1 + ((-1) ** n)
    inequalities = bool(points) and morse_inequalities_hold(index_counts, n)
    if points and (euler_sum != euler_expected):
        messages.append(
            f"Index parity {euler_sum} differs from Euler characteristic {euler_expected}"
        )

    return AdmissibilityReport(
        positive=positive,
        morse=morse and bool(points),
        laplacian_separated=laplacian_separated,
        margin=float(margin),
        min_value=float(min_value),
        index_counts=dict(sorted(index_counts.items())),
        euler_sum=euler_sum,
        euler_expected=euler_expected,
        morse_inequalities=inequalities,
        messages=messages,
    )
