"""Betti-level form of the deformation scheme for two comparable functionals."""
import logging
import typing
from pathlib import Path

import toml

from .complex import attach_cell, homology, load_complex_file, minimal_complex, restrict
from .const import (
    ChainComplex,
    ComplexError,
    CriticalEvent,
    FiltrationScenario,
    SchemeConclusion,
    ScenarioError,
)

_LOGGER = logging.getLogger(__name__)

FIRST_CHAIN = "A ≃ B̄ ≃ C ≃ D"
SECOND_CHAIN = "O ≃ A ≃ B̲ ≃ C"

# Relative slack for inclusions that hold with equality in exact arithmetic
LEVEL_TOLERANCE = 1e-12


def _at_most(left: float, right: float) -> bool:
    return left <= right + LEVEL_TOLERANCE * max(abs(left), abs(right))


def scenario_violations(sc: FiltrationScenario) -> typing.List[str]:
    """Every broken hypothesis of a scenario (empty when it is usable)"""
    violations: typing.List[str] = []
    if not 0 < sc.kappa1 <= sc.kappa2:
        violations.append(f"need 0 < kappa1 <= kappa2 (got {sc.kappa1}, {sc.kappa2})")
        return violations

    crossing = [event for event in sc.events if sc.b_low < event.level <= sc.d]
    if len(crossing) != 1:
        violations.append(
            f"{len(crossing)} J-critical event(s) in ({sc.b_low}, {sc.d}], expected exactly one"
        )

    for event in sc.events:
        if event in crossing:
            continue

        if event.level > sc.k1:
            violations.append(f"event {event.label} at {event.level} lies above k1 = {sc.k1}")

    if not sc.kappa2 * sc.k1 < sc.kappa1 * sc.k2:
        violations.append(
            f"kappa2 * k1 = {sc.kappa2 * sc.k1} is not below kappa1 * k2 = {sc.kappa1 * sc.k2}"
        )

    if not sc.kappa2 * sc.k1 < sc.a:
        violations.append(f"O is not inside A: kappa2 * k1 = {sc.kappa2 * sc.k1} >= A = {sc.a}")

    if not _at_most(sc.a, sc.kappa1 * sc.b_low):
        violations.append(f"A is not inside B_low: A = {sc.a} > kappa1 * B_low")

    if len(crossing) == 1 and not _at_most(sc.kappa2 * crossing[0].level, sc.c):
        violations.append(
            f"B_high is not inside C: kappa2 * J(c) = {sc.kappa2 * crossing[0].level} > C = {sc.c}"
        )

    if not _at_most(sc.c, sc.kappa1 * sc.d):
        violations.append(f"C is not inside D: C = {sc.c} > kappa1 * D = {sc.kappa1 * sc.d}")

    return violations


def _sublevel_complex(sc: FiltrationScenario, below: typing.List[CriticalEvent]) -> ChainComplex:
    labels = [event.label for event in below]
    if sc.sublevel_complex is None:
        return minimal_complex((event.morse_index, event.label) for event in below)

    missing = set(labels) - set(sc.sublevel_complex.labels)
    if missing:
        raise ScenarioError(f"Sublevel complex lacks event(s) {sorted(missing)}")

    cc = restrict(sc.sublevel_complex, labels)
    for event in below:
        if cc.degree_of(event.label) != event.morse_index:
            raise ScenarioError(
                f"Event {event.label} has index {event.morse_index} "
                f"but degree {cc.degree_of(event.label)} in the sublevel complex"
            )

    return cc


def deformation_scheme_check(sc: FiltrationScenario) -> SchemeConclusion:
    """Topology change across the one critical level forces a critical value of I in [A, C]"""
    violations = scenario_violations(sc)
    if violations:
        raise ScenarioError("; ".join(violations))

    event = next(e for e in sc.events if sc.b_low < e.level <= sc.d)
    below = [e for e in sc.events if e.level <= sc.b_low]

    lower = _sublevel_complex(sc, below)
    boundary: typing.Sequence[str] = ()
    if (sc.sublevel_complex is not None) and (event.label in sc.sublevel_complex.labels):
        degree = sc.sublevel_complex.degree_of(event.label)
        column = sc.sublevel_complex.generators[degree].index(event.label)
        rows = sc.sublevel_complex.generators.get(degree - 1, [])
        boundary = [
            label
            for i, label in enumerate(rows)
            if sc.sublevel_complex.boundary(degree)[i, column]
        ]

    try:
        upper = attach_cell(lower, event.morse_index, event.label, boundary)
    except ComplexError as err:
        raise ScenarioError(f"Cannot attach {event.label}: {err}") from err

    betti_below = homology(lower)
    betti_above = homology(upper)
    size = max(len(betti_below), len(betti_above))
    betti_below += [0] * (size - len(betti_below))
    betti_above += [0] * (size - len(betti_above))

    changed = [k for k in range(size) if betti_below[k] != betti_above[k]]
    assert len(changed) == 1, "Attaching a cell changes exactly one Betti number"

    _LOGGER.debug(
        "Crossing %s changes Betti numbers %s -> %s", event.label, betti_below, betti_above
    )

    return SchemeConclusion(
        window=(sc.a, sc.c),
        event=event,
        betti_below=betti_below,
        betti_above=betti_above,
        changed_degree=changed[0],
        contradicted=[FIRST_CHAIN, SECOND_CHAIN],
    )


def comparison_scenario(
    k1: float,
    k2: float,
    k3: float,
    kappa1: float,
    kappa2: float,
    events: typing.Sequence[CriticalEvent],
    sublevel_complex: typing.Optional[ChainComplex] = None,
) -> FiltrationScenario:
    """Thresholds for comparing a non-solvable J with a nearby I.

    D = (kappa2/kappa1) k3, C = kappa2 k3, B_low = k2, A = kappa1 k2.
    """
    if kappa1 <= 0:
        raise ScenarioError(f"kappa1 must be positive (got {kappa1})")

    return FiltrationScenario(
        events=list(events),
        a=kappa1 * k2,
        b_low=k2,
        c=kappa2 * k3,
        d=(kappa2 / kappa1) * k3,
        kappa1=kappa1,
        kappa2=kappa2,
        k1=k1,
        k2=k2,
        sublevel_complex=sublevel_complex,
    )


def load_scenario_file(path: typing.Union[str, Path]) -> FiltrationScenario:
    """Read a TOML scenario.

    Either explicit thresholds (a, b_low, c, d) or k3 for the comparison
    construction; complex names an optional chain-complex file next to it.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as scenario_file:
            data = toml.load(scenario_file)
    except (OSError, toml.TomlDecodeError) as err:
        raise ScenarioError(f"Cannot read scenario {path}: {err}") from err

    try:
        events = [
            CriticalEvent(
                label=str(event["label"]),
                level=float(event["level"]),
                morse_index=int(event["morse_index"]),
            )
            for event in data.get("events", [])
        ]

        sublevel_complex: typing.Optional[ChainComplex] = None
        if "complex" in data:
            complex_path = Path(data["complex"])
            if not complex_path.is_absolute():
                complex_path = path.parent / complex_path

            sublevel_complex = load_complex_file(complex_path)

        kappa1 = float(data["kappa1"])
        kappa2 = float(data["kappa2"])
        k1 = float(data["k1"])
        k2 = float(data["k2"])

        if "k3" in data:
            return comparison_scenario(
                k1, k2, float(data["k3"]), kappa1, kappa2, events, sublevel_complex
            )

        return FiltrationScenario(
            events=events,
            a=float(data["a"]),
            b_low=float(data["b_low"]),
            c=float(data["c"]),
            d=float(data["d"]),
            kappa1=kappa1,
            kappa2=kappa2,
            k1=k1,
            k2=k2,
            sublevel_complex=sublevel_complex,
        )
    except KeyError as err:
        raise ScenarioError(f"Missing key {err} in scenario {path}") from err
