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
import typing

from bubbletower.infinity import CatalogPoint, CriticalCatalog, cpi_energy, negative_set

from .complex import attach_cell, homology, restrict, validate_complex
from .const import ChainComplex, ComplexError, Theorem2Error, Theorem2Report

_LOGGER = logging.getLogger(__name__)

HEART_DIMENSION = 3

VALUE_TIE_TOLERANCE = 1e-9

# Morse index of K -> roles, in the degree order of the K^-1 complex
HEART_ROLES: typing.Dict[int, typing.Tuple[str, ...]] = {
    3: ("x0",),
    2: ("x1",),
    1: ("x2_1", "x2_2"),
    0: ("x3_1", "x3_2"),
}
HEART_ROLES_FLAT = tuple(name for names in HEART_ROLES.values() for name in names)


def _pair_key(point: CatalogPoint) -> typing.Tuple[float, str]:
    return (-point.value, point.label)


def _values_tie(first: CatalogPoint, second: CatalogPoint) -> bool:
    # Equal critical values put the positive Laplacian first
    return abs(first.value - second.value) <= VALUE_TIE_TOLERANCE * max(first.value, second.value)


def heart_roles(catalog: CriticalCatalog) -> typing.Dict[str, CatalogPoint]:
    """Assign x0, x1, x2_1, x2_2, x3_1, x3_2 by Morse index and value"""
    if catalog.n != HEART_DIMENSION:
        raise Theorem2Error([f"heart data lives on S^3, got n = {catalog.n}"])

    by_index: typing.Dict[int, typing.List[CatalogPoint]] = {}
    for point in catalog.points:
        by_index.setdefault(point.morse_index, []).append(point)

    counts = {m: len(by_index.get(m, [])) for m in range(HEART_DIMENSION + 1)}
    expected = {m: len(roles) for m, roles in HEART_ROLES.items()}
    if counts != expected or len(catalog.points) != sum(expected.values()):
        inverse = sorted(HEART_DIMENSION - p.morse_index for p in catalog.points)
        raise Theorem2Error(
            [f"index multiset {inverse} differs from the heart multiset [0, 1, 2, 2, 3, 3]"]
        )

    roles: typing.Dict[str, CatalogPoint] = {}
    for morse_index, names in HEART_ROLES.items():
        points = sorted(by_index[morse_index], key=_pair_key)
        if (len(points) == 2) and _values_tie(points[0], points[1]):
            points.sort(key=lambda p: (0 if p.laplacian > 0 else 1, p.label))

        roles.update(zip(names, points))

    return roles


def theorem2_certify(
    catalog: CriticalCatalog,
    heart_complex: ChainComplex,
    energy_constant: float,
) -> Theorem2Report:
    """Existence of a solution with energy at most that of the x2_2 bubble.

    heart_complex is the K^-1 Morse complex over the role labels.
    """
    roles = heart_roles(catalog)
    x1, x2_1, x2_2 = roles["x1"], roles["x2_1"], roles["x2_2"]

    violations: typing.List[str] = []
    if (1.0 / x2_1.value > 1.0 / x2_2.value) and not _values_tie(x2_1, x2_2):
        violations.append(
            f"(i) K^-1(x2_1) = {1.0 / x2_1.value} exceeds K^-1(x2_2) = {1.0 / x2_2.value}"
        )

    if not x2_1.laplacian > 0:
        violations.append(f"(ii) Laplacian at x2_1 ({x2_1.label}) is {x2_1.laplacian}, not > 0")

    if not x2_2.laplacian < 0:
        violations.append(f"(ii) Laplacian at x2_2 ({x2_2.label}) is {x2_2.laplacian}, not < 0")

    if not x1.laplacian < 0:
        violations.append(f"(ii) Laplacian at x1 ({x1.label}) is {x1.laplacian}, not < 0")

    check = validate_complex(heart_complex)
    if not check.ok:
        violations.append(f"heart complex: {check.message}")

    missing = set(HEART_ROLES_FLAT) - set(heart_complex.labels)
    if missing:
        violations.append(f"heart complex lacks generator(s) {sorted(missing)}")

    if violations:
        raise Theorem2Error(violations)

    negative = [p.label for p in negative_set(catalog)]

    # Assumed critical set below the x2_2 level: x0 and x1 only
    try:
        sublevel = restrict(heart_complex, ["x0", "x1"])
        column = heart_complex.generators[2].index("x2_1")
        rows = heart_complex.generators[1]
        attaching = [
            label for i, label in enumerate(rows) if heart_complex.boundary(2)[i, column]
        ]
        injected = attach_cell(sublevel, 2, "x2_1", attaching)
    except ComplexError as err:
        raise Theorem2Error([f"heart complex: {err}"]) from err

    betti_sublevel = homology(sublevel)
    betti_injected = homology(injected)
    betti_sublevel += [0] * (len(betti_injected) - len(betti_sublevel))

    mismatch = [k for k, (b, c) in enumerate(zip(betti_sublevel, betti_injected)) if b != c]
    if mismatch != [1]:
        raise Theorem2Error(
            [
                "the 2-cell of x2_1 does not kill the 1-cycle of x1 "
                f"(Betti {betti_sublevel} -> {betti_injected})"
            ]
        )

    energy_bound = cpi_energy([x2_2.value], HEART_DIMENSION, energy_constant)
    _LOGGER.debug("Existence certified below J = %s", energy_bound)

    return Theorem2Report(
        roles={role: point.label for role, point in roles.items()},
        negative_set=negative,
        energy_bound=energy_bound,
        betti_sublevel=betti_sublevel,
        betti_injected=betti_injected,
        mismatch_degree=1,
    )
