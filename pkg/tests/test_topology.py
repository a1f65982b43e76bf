"""GF(2) complexes, the deformation scheme and heart existence."""
import numpy as np
import pytest

from bubbletower.func_core import find_critical_points
from bubbletower.infinity import CriticalCatalog
from bubbletower.topology import (
    ChainComplex,
    ComplexError,
    CriticalEvent,
    ScenarioError,
    Theorem2Error,
    attach_cell,
    chain_vector,
    comparison_scenario,
    deformation_scheme_check,
    euler_characteristic,
    heart_roles,
    homology,
    load_complex_file,
    load_scenario_file,
    minimal_complex,
    parse_complex,
    restrict,
    scenario_violations,
    theorem2_certify,
    validate_complex,
)
from bubbletower.topology import gf2

from .conftest import (
    SADDLE_LOWER,
    SADDLE_UPPER,
    SOUTH,
    make_heart_catalog,
    nearest_point,
)


@pytest.fixture(scope="module")
def heart_complex(data_dir):
    return load_complex_file(data_dir / "heart" / "complex.toml")


def heart_complex_data(top_boundary: str):
    return {
        "degrees": {
            "0": {"generators": ["x0"]},
            "1": {"generators": ["x1"], "boundary": {"x1": "0"}},
            "2": {"generators": ["x2_1", "x2_2"], "boundary": {"x2_1": "1", "x2_2": "1"}},
            "3": {
                "generators": ["x3_1", "x3_2"],
                "boundary": {"x3_1": top_boundary, "x3_2": "11"},
            },
        }
    }


def test_gf2_rank():
    assert gf2.rank(np.eye(3)) == 3
    assert gf2.rank([[1, 1], [1, 1]]) == 1
    assert gf2.rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert gf2.rank(np.zeros((0, 4))) == 0
    assert gf2.matmul([[1, 1]], [[1], [1]]).tolist() == [[0]]


def test_heart_complex(heart_complex):
    assert validate_complex(heart_complex).ok
    assert homology(heart_complex) == [1, 0, 0, 1]
    assert euler_characteristic(heart_complex) == 0


def test_heart_complex_variant():
    # x3_1 attached along x2_1 + x2_1 is a cycle; Betti numbers do not change
    variant = parse_complex(heart_complex_data("00"))
    assert validate_complex(variant).ok
    assert homology(variant) == [1, 0, 0, 1]


def test_parse_complex_errors():
    with pytest.raises(ComplexError):
        parse_complex(heart_complex_data("1"))

    with pytest.raises(ComplexError):
        parse_complex(heart_complex_data("12"))

    data = heart_complex_data("11")
    data["degrees"]["1"]["boundary"] = {"y1": "1"}
    with pytest.raises(ComplexError):
        parse_complex(data)

    with pytest.raises(ComplexError):
        parse_complex({"degrees": {"one": {"generators": ["a"]}}})


def test_boundary_of_boundary():
    cc = ChainComplex(
        generators={0: ["a"], 1: ["b"], 2: ["c"]},
        boundaries={1: np.array([[1]]), 2: np.array([[1]])},
    )
    check = validate_complex(cc)
    assert not check.ok
    assert check.violating_generator == "c"


def test_complex_construction():
    with pytest.raises(ComplexError):
        ChainComplex(generators={0: ["a", "a"]})

    with pytest.raises(ComplexError):
        ChainComplex(generators={0: ["a"], 1: ["b"]}, boundaries={1: np.ones((2, 1))})

    # S^2 as a point with a 2-cell
    sphere = attach_cell(minimal_complex([(0, "p")]), 2, "e")
    assert homology(sphere) == [1, 0, 1]

    # Interval: two points joined by an edge
    interval = attach_cell(minimal_complex([(0, "a"), (0, "b")]), 1, "e", ["a", "b"])
    assert homology(interval) == [1, 0]
    assert chain_vector(interval, 0, ["a", "b", "a"]).tolist() == [0, 1]

    with pytest.raises(ComplexError):
        chain_vector(interval, 0, np.ones(3))

    with pytest.raises(ComplexError):
        attach_cell(interval, 0, "a")

    with pytest.raises(ComplexError):
        attach_cell(interval, 0, "c", ["a"])

    with pytest.raises(ComplexError):
        attach_cell(interval, 1, "f", ["z"])

    # An edge needs two endpoints; a loop has none over GF(2)
    with pytest.raises(ComplexError):
        attach_cell(interval, 1, "f", ["a"])

    circle = attach_cell(interval, 1, "f", ["a", "b"])
    assert homology(circle) == [1, 1]
    assert homology(attach_cell(interval, 1, "loop", ["a", "a"])) == [1, 1]

    # Boundary of the edge is a + b, not a cycle in degree 1 for a 2-cell
    with pytest.raises(ComplexError):
        attach_cell(interval, 2, "g", ["e"])


def test_restrict(heart_complex):
    sub = restrict(heart_complex, ["x0", "x1", "x2_1"])
    assert sub.labels == ["x0", "x1", "x2_1"]
    assert homology(sub) == [1, 0, 0]

    # x2_1 needs x1
    with pytest.raises(ComplexError):
        restrict(heart_complex, ["x0", "x2_1"])

    with pytest.raises(ComplexError):
        restrict(heart_complex, ["x9"])


# -----------------------------------------------------------------------------


def test_comparison_scenario(data_dir):
    scenario = load_scenario_file(data_dir / "scenarios" / "comparison.toml")
    assert scenario.a == pytest.approx(1.235)
    assert scenario.c == pytest.approx(1.68)
    assert scenario.d == pytest.approx(1.05 / 0.95 * 1.6)
    assert scenario_violations(scenario) == []

    conclusion = deformation_scheme_check(scenario)
    assert conclusion.window == pytest.approx((1.235, 1.68))
    assert conclusion.event.label == "c"
    assert conclusion.betti_below == [1, 1, 0]
    assert conclusion.betti_above == [1, 0, 0]
    assert conclusion.changed_degree == 1
    assert len(conclusion.contradicted) == 2


def test_point_scenario(data_dir):
    conclusion = deformation_scheme_check(
        load_scenario_file(data_dir / "scenarios" / "point.toml")
    )
    assert conclusion.betti_below == [0]
    assert conclusion.betti_above == [1]
    assert conclusion.changed_degree == 0


def test_scenario_violations():
    events = [CriticalEvent("u", 0.8, 0), CriticalEvent("c", 1.5, 1)]

    assert scenario_violations(comparison_scenario(1.0, 1.3, 1.6, 0.95, 1.05, events)) == []

    # Two events cross the critical band
    crowded = events + [CriticalEvent("d", 1.4, 2)]
    with pytest.raises(ScenarioError):
        deformation_scheme_check(comparison_scenario(1.0, 1.3, 1.6, 0.95, 1.05, crowded))

    # Event between k1 and B_low
    stray = events + [CriticalEvent("s", 1.2, 1)]
    violations = scenario_violations(comparison_scenario(1.0, 1.3, 1.6, 0.95, 1.05, stray))
    assert len(violations) == 1
    assert "s" in violations[0]

    # kappa2 k1 >= kappa1 k2
    assert scenario_violations(comparison_scenario(1.2, 1.25, 1.6, 0.95, 1.05, events))

    assert scenario_violations(comparison_scenario(1.0, 1.3, 1.6, 1.05, 0.95, events))

    with pytest.raises(ScenarioError):
        comparison_scenario(1.0, 1.3, 1.6, 0.0, 1.05, events)


def test_scenario_complex_mismatch(data_dir):
    scenario = load_scenario_file(data_dir / "scenarios" / "comparison.toml")
    scenario.events.append(CriticalEvent("u2", 0.9, 1))
    with pytest.raises(ScenarioError):
        deformation_scheme_check(scenario)

    scenario = load_scenario_file(data_dir / "scenarios" / "comparison.toml")
    scenario.events[1] = CriticalEvent("u1", 1.0, 0)
    with pytest.raises(ScenarioError):
        deformation_scheme_check(scenario)


def test_random_scenarios(rng):
    for _ in range(50):
        k1 = rng.uniform(0.5, 1.0)
        k2 = k1 * rng.uniform(1.2, 1.5)
        k3 = k2 * rng.uniform(1.1, 1.5)
        kappa1 = rng.uniform(0.95, 0.999)
        kappa2 = rng.uniform(1.001, 1.05)

        events = [
            CriticalEvent(f"u{j}", rng.uniform(0.1, k1), int(rng.integers(0, 4)))
            for j in range(int(rng.integers(0, 5)))
        ]
        crossing = CriticalEvent("c", rng.uniform(k2, k3), int(rng.integers(0, 4)))
        scenario = comparison_scenario(k1, k2, k3, kappa1, kappa2, events + [crossing])

        conclusion = deformation_scheme_check(scenario)
        low, high = conclusion.window
        assert low == pytest.approx(kappa1 * k2)
        assert high == pytest.approx(kappa2 * k3)
        assert low < high
        assert conclusion.event == crossing

        # Free attachment adds a class in the degree of the event
        assert conclusion.changed_degree == crossing.morse_index
        assert (
            conclusion.betti_above[crossing.morse_index]
            == conclusion.betti_below[crossing.morse_index] + 1
        )


# -----------------------------------------------------------------------------


def test_heart_roles(heart_catalog):
    roles = heart_roles(heart_catalog)
    assert {role: point.label for role, point in roles.items()} == {
        "x0": "x0",
        "x1": "x1",
        "x2_1": "x2_1",
        "x2_2": "x2_2",
        "x3_1": "x3_1",
        "x3_2": "x3_2",
    }


def test_theorem2(heart_catalog, heart_complex):
    report = theorem2_certify(heart_catalog, heart_complex, 1.0)
    assert report.negative_set == ["x0", "x1", "x2_2"]
    assert report.energy_bound == pytest.approx(2.75 ** (-1.0 / 3.0))
    assert report.betti_sublevel == [1, 1, 0]
    assert report.betti_injected == [1, 0, 0]
    assert report.mismatch_degree == 1

    scaled = theorem2_certify(heart_catalog, heart_complex, 30.0)
    assert scaled.energy_bound == pytest.approx(30.0 * report.energy_bound)


def test_theorem2_violations(heart_complex):
    with pytest.raises(Theorem2Error) as info:
        theorem2_certify(make_heart_catalog(laplacian_lower=0.5), heart_complex, 1.0)

    assert any(v.startswith("(ii)") for v in info.value.violations)

    with pytest.raises(Theorem2Error):
        theorem2_certify(make_heart_catalog(laplacian_south=1.0), heart_complex, 1.0)

    # Missing a minimum
    catalog = make_heart_catalog()
    short = CriticalCatalog(n=3, points=catalog.points[:-1])
    with pytest.raises(Theorem2Error):
        theorem2_certify(short, heart_complex, 1.0)

    high = CriticalCatalog(n=5, points=catalog.points)
    with pytest.raises(Theorem2Error):
        heart_roles(high)

    # d2 of x2_1 vanishes, so the sublevel 1-cycle survives
    data = heart_complex_data("11")
    data["degrees"]["2"]["boundary"] = {"x2_1": "0", "x2_2": "0"}
    with pytest.raises(Theorem2Error):
        theorem2_certify(catalog, parse_complex(data), 1.0)


def test_theorem2_on_searched_heart(patched_heart, heart_complex):
    points = find_critical_points(patched_heart, grid_resolution=6)
    catalog = CriticalCatalog.from_critical_points(3, points)
    report = theorem2_certify(catalog, heart_complex, 1.0)

    labels = {p.label: p for p in catalog.points}
    located = dict(zip((p.label for p in catalog.points), points))
    assert located[report.roles["x1"]] is nearest_point(points, SOUTH)
    assert located[report.roles["x2_1"]] is nearest_point(points, SADDLE_UPPER)
    assert located[report.roles["x2_2"]] is nearest_point(points, SADDLE_LOWER)
    assert labels[report.roles["x2_2"]].laplacian < 0
    assert len(report.negative_set) == 3
