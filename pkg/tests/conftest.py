"""Shared fixtures: corpus candidates, the smooth heart and its surgery."""
import typing
from pathlib import Path

import numpy as np
import pytest

from bubbletower.func_core import (
    CandidateFunction,
    CriticalPoint,
    find_critical_points,
    laplacian_surgery,
    load_candidate_file,
)
from bubbletower.func_core.sphere import geodesic_distance
from bubbletower.infinity import CatalogPoint, CriticalCatalog

DATA_DIR = Path(__file__).parent.parent / "data"
CANDIDATES_DIR = DATA_DIR / "candidates"

SQRT3_2 = float(np.sqrt(3.0) / 2.0)
NORTH = np.array([0.0, 0.0, 0.0, 1.0])
SOUTH = np.array([0.0, 0.0, 0.0, -1.0])
SADDLE_UPPER = np.array([0.0, SQRT3_2, 0.0, -0.5])
SADDLE_LOWER = np.array([0.0, -SQRT3_2, 0.0, -0.5])

SURGERY_COEFFICIENTS = [-1.6485, 0.67575, 0.901]
SURGERY_DELTA = 0.2
SURGERY_EPSILON = 0.1

# Values, Morse indices and Laplacians of the heart critical points
HEART_VALUE_MAX = 5.0
HEART_VALUE_SOUTH = 3.0
HEART_VALUE_SADDLE = 2.75
HEART_VALUE_MIN = 1.4
HEART_LAPLACIAN_SADDLE = 0.5
HEART_LAPLACIAN_PATCHED = 2.0 * sum(SURGERY_COEFFICIENTS)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def s2_height() -> CandidateFunction:
    return load_candidate_file(CANDIDATES_DIR / "s2_height.expr")


@pytest.fixture(scope="session")
def s3_height() -> CandidateFunction:
    return load_candidate_file(CANDIDATES_DIR / "s3_height.expr")


@pytest.fixture(scope="session")
def s5_height() -> CandidateFunction:
    return load_candidate_file(CANDIDATES_DIR / "s5_height.expr")


@pytest.fixture(scope="session")
def heart() -> CandidateFunction:
    return load_candidate_file(CANDIDATES_DIR / "heart.expr")


@pytest.fixture(scope="session")
def heart_points(heart) -> typing.List[CriticalPoint]:
    return find_critical_points(heart, grid_resolution=6)


def nearest_point(
    points: typing.Sequence[CriticalPoint], location: np.ndarray
) -> CriticalPoint:
    return min(points, key=lambda p: float(geodesic_distance(p.location, location)))


@pytest.fixture(scope="session")
def patched_heart(heart, heart_points) -> CandidateFunction:
    """Heart with a negative Laplacian at the lower index-1 saddle"""
    return laplacian_surgery(
        heart,
        nearest_point(heart_points, SADDLE_LOWER),
        SURGERY_COEFFICIENTS,
        SURGERY_DELTA,
        SURGERY_EPSILON,
        critical_points=heart_points,
    )


def make_heart_catalog(
    laplacian_upper: float = HEART_LAPLACIAN_SADDLE,
    laplacian_lower: float = HEART_LAPLACIAN_PATCHED,
    laplacian_south: float = -4.0,
) -> CriticalCatalog:
    """Heart catalog in role labels (K = 4 - 2.5 x1^2 - x2^2 + x4)"""
    return CriticalCatalog(
        n=3,
        points=[
            CatalogPoint("x0", HEART_VALUE_MAX, 3, -10.0),
            CatalogPoint("x1", HEART_VALUE_SOUTH, 2, laplacian_south),
            CatalogPoint("x2_1", HEART_VALUE_SADDLE, 1, laplacian_upper),
            CatalogPoint("x2_2", HEART_VALUE_SADDLE, 1, laplacian_lower),
            CatalogPoint("x3_1", HEART_VALUE_MIN, 0, 12.8),
            CatalogPoint("x3_2", HEART_VALUE_MIN, 0, 12.8),
        ],
    )


@pytest.fixture
def heart_catalog() -> CriticalCatalog:
    return make_heart_catalog()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20221031)


def random_sphere_points(
    rng: np.random.Generator, n: int, count: int
) -> np.ndarray:
    points = rng.normal(size=(count, n + 1))
    return points / np.linalg.norm(points, axis=1, keepdims=True)
