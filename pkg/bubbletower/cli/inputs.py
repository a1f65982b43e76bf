"""Candidate, catalog and constant loading shared by the commands."""
import logging
import typing
from pathlib import Path

import numpy as np

from bubbletower.const import InputError
from bubbletower.func_core import (
    CandidateFunction,
    CriticalPoint,
    CriticalSearch,
    SphereSpec,
    Tolerances,
    laplacian_surgery,
    load_candidate_file,
    parse_candidate,
    search_critical_points,
)
from bubbletower.func_core.sphere import geodesic_distance, normalize
from bubbletower.infinity import CriticalCatalog
from bubbletower.topology import heart_roles
from bubbletower.variational import cpi_energy_constant

from .const import RunContext

_LOGGER = logging.getLogger(__name__)

DEFAULT_GRID_RESOLUTION = 6
DEFAULT_QUADRATURE_LEVEL = 4
HEART_LABELS = "heart"
SURGERY_CENTER_TOLERANCE = 1e-3


def section(root_config: typing.Mapping[str, typing.Any], name: str) -> typing.Dict[str, typing.Any]:
    return dict(root_config.get(name, {}))


def tolerances(root_config: typing.Mapping[str, typing.Any]) -> Tolerances:
    return Tolerances.from_config(section(root_config, "func_core"))


def grid_resolution(root_config: typing.Mapping[str, typing.Any]) -> int:
    return int(section(root_config, "func_core").get("grid_resolution", DEFAULT_GRID_RESOLUTION))


def quadrature_level(root_config: typing.Mapping[str, typing.Any], context: RunContext) -> int:
    if context.quad_level is not None:
        return context.quad_level

    return int(
        section(root_config, "variational").get("quadrature_level", DEFAULT_QUADRATURE_LEVEL)
    )


def load_base_candidate(
    root_config: typing.Mapping[str, typing.Any], validate: bool = True
) -> CandidateFunction:
    """Candidate from candidate.file or candidate.expression + candidate.dim"""
    candidate_config = section(root_config, "candidate")
    file_name = candidate_config.get("file", "")
    expression = candidate_config.get("expression", "")

    if file_name:
        path = Path(file_name)
        if not path.is_file():
            raise InputError(f"Missing candidate file: {path}")

        _LOGGER.debug("Loading candidate (%s)", path)
        candidate = load_candidate_file(path, validate=validate)
    elif expression:
        if "dim" not in candidate_config:
            raise InputError("candidate.dim is required with candidate.expression")

        candidate = parse_candidate(
            expression, SphereSpec(int(candidate_config["dim"])), validate=validate
        )
    else:
        raise InputError("Set candidate.file or candidate.expression")

    _LOGGER.info("Candidate loaded (%s)", candidate.text)
    return candidate


def load_run_candidate(
    root_config: typing.Mapping[str, typing.Any], validate: bool = True
) -> CandidateFunction:
    """Base candidate with the configured Laplacian surgery applied"""
    candidate = load_base_candidate(root_config, validate=validate)
    surgery = section(section(root_config, "candidate"), "surgery")
    if not surgery.get("enabled", False):
        return candidate

    try:
        center_location = normalize(np.asarray(surgery["center"], dtype=float))
        coefficients = [float(c) for c in surgery["coefficients"]]
        delta = float(surgery["delta"])
        epsilon = float(surgery["epsilon"])
    except KeyError as err:
        raise InputError(f"Missing candidate.surgery key {err}") from err

    run_tolerances = tolerances(root_config)
    resolution = grid_resolution(root_config)
    points = search_critical_points(candidate, resolution, run_tolerances).points
    center = min(points, key=lambda p: float(geodesic_distance(p.location, center_location)))
    if float(geodesic_distance(center.location, center_location)) > SURGERY_CENTER_TOLERANCE:
        raise InputError(f"No critical point at surgery center {center_location.tolist()}")

    _LOGGER.debug("Loading surgery at %s", center.location.tolist())
    patched = laplacian_surgery(
        candidate,
        center,
        coefficients,
        delta,
        epsilon,
        critical_points=points,
        grid_resolution=resolution,
        tolerances=run_tolerances,
    )
    _LOGGER.info("Surgery applied (delta=%s, epsilon=%s)", delta, epsilon)

    return patched


def search(candidate: CandidateFunction, root_config: typing.Mapping[str, typing.Any]) -> CriticalSearch:
    return search_critical_points(candidate, grid_resolution(root_config), tolerances(root_config))


def point_labels(
    n: int,
    points: typing.Sequence[CriticalPoint],
    root_config: typing.Mapping[str, typing.Any],
) -> typing.List[str]:
    """candidate.labels: a list in catalog order, "heart" for the S^3 roles, or p0, p1, ..."""
    labels = section(root_config, "candidate").get("labels")
    if labels is None:
        return [f"p{i}" for i in range(len(points))]

    if labels == HEART_LABELS:
        generic = CriticalCatalog.from_critical_points(n, points)
        roles = heart_roles(generic)
        by_label = {point.label: role for role, point in roles.items()}
        return [by_label[point.label] for point in generic.points]

    labels = [str(label) for label in labels]
    if len(labels) != len(points):
        raise InputError(f"{len(labels)} label(s) for {len(points)} critical point(s)")

    return labels


def build_catalog(
    candidate: CandidateFunction,
    points: typing.Sequence[CriticalPoint],
    root_config: typing.Mapping[str, typing.Any],
) -> CriticalCatalog:
    labels = point_labels(candidate.n, points, root_config)
    return CriticalCatalog.from_critical_points(candidate.n, points, labels)


def energy_constant(
    root_config: typing.Mapping[str, typing.Any], context: RunContext, n: int
) -> float:
    """infinity.energy_constant, or the single-bubble energy of K = 1"""
    configured = section(root_config, "infinity").get("energy_constant")
    if configured is not None:
        return float(configured)

    return cpi_energy_constant(
        n, level=quadrature_level(root_config, context), cache_dir=context.cache_dir
    )


def critical_point_row(label: str, point: CriticalPoint) -> typing.Dict[str, typing.Any]:
    return {
        "label": label,
        "location": point.location,
        "value": point.value,
        "morse_index": point.morse_index,
        "inverse_index": point.inverse_index,
        "laplacian": point.laplacian,
        "laplacian_sign": "-" if point.laplacian < 0 else "+",
        "hessian_eigenvalues": point.hessian_eigenvalues,
        "gradient_norm": point.gradient_norm,
    }
