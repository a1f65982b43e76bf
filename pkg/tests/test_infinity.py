"""Critical points at infinity: enumeration, index counts and the heart candidates."""
import numpy as np
import pytest

from bubbletower.infinity import (
    MAX_ENUMERATED,
    CatalogMode,
    CatalogPoint,
    CriticalCatalog,
    InfinityError,
    StructurePoint,
    cancellation_pairs,
    catalog_mode,
    cpi_energy,
    cpi_index,
    enumerate_cpi,
    index_count,
    index_count_closed_form,
    is_power_set_lattice,
    mu_max,
    negative_set,
    nonexistence_candidates,
)

from .conftest import make_heart_catalog


def random_catalog(rng: np.random.Generator, n: int, size: int, with_maximum: bool):
    points = []
    for j in range(size):
        morse_index = int(rng.integers(0, n + 1))
        laplacian = float(rng.choice([-1.0, 1.0]) * (0.5 + rng.random()))
        points.append(
            CatalogPoint(
                label=f"p{j}",
                value=float(0.5 + 3.0 * rng.random()),
                morse_index=morse_index,
                laplacian=laplacian,
            )
        )

    if with_maximum:
        points[int(rng.integers(0, size))] = CatalogPoint(
            label="y", value=4.0, morse_index=n, laplacian=-2.0
        )

    return CriticalCatalog(n=n, points=points)


def test_modes():
    assert catalog_mode(5) == CatalogMode.HIGH_DIM
    assert catalog_mode(7) == CatalogMode.HIGH_DIM
    assert catalog_mode(2) == CatalogMode.SINGLE_BUBBLE
    assert catalog_mode(3) == CatalogMode.SINGLE_BUBBLE

    with pytest.raises(InfinityError):
        catalog_mode(4)


def test_catalog_validation():
    with pytest.raises(InfinityError):
        CriticalCatalog(n=5, points=[CatalogPoint("a", 1.0, 5, -1.0)] * 2)

    with pytest.raises(InfinityError):
        CriticalCatalog(n=5, points=[CatalogPoint("a", 1.0, 5, 0.0)])

    with pytest.raises(InfinityError):
        CriticalCatalog(n=5, points=[CatalogPoint("a", 1.0, 6, -1.0)])


def test_cpi_energy_and_index():
    assert cpi_energy([4.0], 3, 1.0) == pytest.approx(4.0 ** (-1.0 / 3.0))
    assert cpi_energy([1.0, 1.0], 6, 2.0) == pytest.approx(2.0 * 2.0 ** (1.0 / 3.0))

    # (p - 1) + sum(n - m)
    assert cpi_index([5], 5) == 0
    assert cpi_index([5, 3, 4], 5) == 2 + 0 + 2 + 1


def test_enumeration_high_dim():
    catalog = CriticalCatalog(
        n=5,
        points=[
            CatalogPoint("y", 4.0, 5, -2.0),
            CatalogPoint("s", 2.0, 3, -1.0),
            CatalogPoint("t", 1.5, 2, 1.0),
            CatalogPoint("u", 1.0, 1, -1.0),
        ],
    )
    assert [p.label for p in negative_set(catalog)] == ["y", "s", "u"]

    cpis = enumerate_cpi(catalog, 1.0)
    assert len(cpis) == 7
    assert [c.energy for c in cpis] == sorted(c.energy for c in cpis)
    assert cpis[0].members == ("y",)
    assert cpis[-1].members == ("y", "s", "u")
    assert is_power_set_lattice(cpis, 3)

    # Energy grows under inclusion, so the full set is the maximum
    assert mu_max(catalog, 1.0) == pytest.approx(cpis[-1].energy)
    assert index_count(catalog) == 1
    assert index_count_closed_form([5, 3, 1], 5) == 1


def test_enumeration_single_bubble():
    catalog = make_heart_catalog()
    cpis = enumerate_cpi(catalog, 1.0)
    assert [c.members for c in cpis] == [("x0",), ("x1",), ("x2_2",)]
    assert [c.index for c in cpis] == [0, 1, 2]

    # Single bubbles at x0 (+1), x1 (-1), x2_2 (+1)
    assert index_count(catalog) == 1
    assert mu_max(catalog, 1.0) == pytest.approx(2.75 ** (-1.0 / 3.0))


def test_empty_negative_set():
    catalog = CriticalCatalog(n=5, points=[CatalogPoint("m", 1.0, 0, 1.0)])
    with pytest.raises(InfinityError):
        mu_max(catalog, 1.0)

    assert enumerate_cpi(catalog, 1.0) == []
    assert index_count(catalog) == 0


def test_index_count_is_one(rng):
    for _ in range(200):
        n = int(rng.integers(5, 8))
        catalog = random_catalog(rng, n, int(rng.integers(1, 13)), with_maximum=True)
        assert index_count(catalog) == 1


def test_closed_form_matches_enumeration(rng):
    for _ in range(100):
        n = int(rng.integers(5, 8))
        catalog = random_catalog(rng, n, int(rng.integers(1, 11)), with_maximum=False)
        negatives = negative_set(catalog)
        if not negatives:
            continue

        cpis = enumerate_cpi(catalog, 1.0)
        enumerated = sum(c.parity for c in cpis)
        assert enumerated == index_count(catalog)
        assert enumerated == index_count_closed_form(
            [p.morse_index for p in negatives], n
        )


def test_enumeration_cap():
    points = [CatalogPoint("y", 4.0, 5, -1.0)] + [
        CatalogPoint(f"p{j}", 1.0 + j, 2, -1.0) for j in range(MAX_ENUMERATED)
    ]
    catalog = CriticalCatalog(n=5, points=points)
    with pytest.raises(InfinityError):
        enumerate_cpi(catalog, 1.0)

    # Closed form past the cap
    assert index_count(catalog) == 1


def test_heart_nonexistence_candidates():
    structure = [
        StructurePoint("x0", 3),
        StructurePoint("x1", 2),
        StructurePoint("x2_1", 1),
        StructurePoint("x2_2", 1),
        StructurePoint("x3_1", 0),
        StructurePoint("x3_2", 0),
    ]
    candidates = nonexistence_candidates(3, structure)
    assert candidates == [
        frozenset({"x0"}),
        frozenset({"x0", "x1", "x2_1"}),
        frozenset({"x0", "x1", "x2_2"}),
    ]


def test_forced_structure():
    structure = [
        StructurePoint("x0", 3),
        StructurePoint("x1", 2, forced=True),
        StructurePoint("x2_1", 1, forced=False),
        StructurePoint("x2_2", 1),
    ]
    assert nonexistence_candidates(3, structure) == [frozenset({"x0", "x1", "x2_2"})]


def test_cancellation_pairs():
    catalog = CriticalCatalog(
        n=5,
        points=[
            CatalogPoint("y", 4.0, 5, -2.0),
            CatalogPoint("s", 2.0, 3, -1.0),
            CatalogPoint("u", 1.0, 1, -1.0),
            CatalogPoint("m", 0.5, 0, 3.0),
        ],
    )
    pairs = cancellation_pairs(catalog, "y")
    assert len(pairs) == 3
    for pair in pairs:
        assert pair.with_maximum.index == pair.without.index + 1
        assert set(pair.with_maximum.members) == set(pair.without.members) | {"y"}

    with pytest.raises(InfinityError):
        cancellation_pairs(catalog, "s")

    with pytest.raises(InfinityError):
        cancellation_pairs(catalog, "m")

    with pytest.raises(InfinityError):
        cancellation_pairs(make_heart_catalog(), "x0")
