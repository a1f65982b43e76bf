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

import typing
from dataclasses import dataclass, field

import numpy as np

from bubbletower.const import AnalysisError, InputError


class ComplexError(InputError):
    """Inconsistent chain complex (shapes, labels, or non-cycle attachment)"""


class ScenarioError(InputError):
    """Filtration scenario violates its invariants"""


class Theorem2Error(AnalysisError):
    """Heart data does not satisfy the existence hypotheses"""

    def __init__(self, violations: typing.Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass
class ChainComplex:
    """Graded GF(2) complex.

    boundaries[k] has shape (len(generators[k - 1]), len(generators[k])) with
    column j holding the boundary of generators[k][j].
    """

    generators: typing.Dict[int, typing.List[str]]
    boundaries: typing.Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ComplexError(f"Duplicate generator labels: {labels}")

        for degree in self.generators:
            if degree < 0:
                raise ComplexError(f"Negative degree {degree}")

        for degree, matrix in list(self.boundaries.items()):
            expected = (self.rank(degree - 1), self.rank(degree))
            matrix = np.asarray(matrix, dtype=np.uint8) % 2
            if matrix.shape != expected:
                raise ComplexError(
                    f"Boundary in degree {degree} has shape {matrix.shape}, expected {expected}"
                )

            self.boundaries[degree] = matrix

    @property
    def labels(self) -> typing.List[str]:
        return [label for degree in sorted(self.generators) for label in self.generators[degree]]

    @property
    def max_degree(self) -> int:
        nonempty = [d for d, labels in self.generators.items() if labels]
        return max(nonempty, default=-1)

    def rank(self, degree: int) -> int:
        """Number of generators in a degree"""
        return len(self.generators.get(degree, []))

    def boundary(self, degree: int) -> np.ndarray:
        """d_degree: C_degree -> C_(degree - 1), zeros when not given"""
        if degree in self.boundaries:
            return self.boundaries[degree]

        return np.zeros((self.rank(degree - 1), self.rank(degree)), dtype=np.uint8)

    def degree_of(self, label: str) -> int:
        for degree, labels in self.generators.items():
            if label in labels:
                return degree

        raise ComplexError(f"No generator labeled {label}")

    @property
    def euler_characteristic(self) -> int:
        return sum(((-1) ** d) * len(labels) for d, labels in self.generators.items())


@dataclass
class ComplexCheck:
    ok: bool
    message: str = ""
    violating_generator: typing.Optional[str] = None


@dataclass(frozen=True)
class CriticalEvent:
    """Critical level of J with its Morse index"""

    label: str
    level: float
    morse_index: int


@dataclass
class FiltrationScenario:
    """Sublevel thresholds of two comparable functionals kappa1 J <= I <= kappa2 J.

    D and B_low are J-levels; A and C are I-levels.
    """

    events: typing.List[CriticalEvent]
    a: float
    b_low: float
    c: float
    d: float
    kappa1: float
    kappa2: float
    k1: float
    """Bound on the J-levels of all events but one"""

    k2: float
    sublevel_complex: typing.Optional[ChainComplex] = None
    """Connection data of the events below B_low, zero boundaries when absent"""


@dataclass
class SchemeConclusion:
    """I has a critical value in [A, C]"""

    window: typing.Tuple[float, float]
    event: CriticalEvent
    betti_below: typing.List[int]
    betti_above: typing.List[int]
    changed_degree: int
    contradicted: typing.List[str]


@dataclass
class Theorem2Report:
    """Existence below the energy of the lower index-one saddle"""

    roles: typing.Dict[str, str]
    """Role (x0, x1, x2_1, ...) -> catalog label"""

    negative_set: typing.List[str]
    energy_bound: float
    betti_sublevel: typing.List[int]
    betti_injected: typing.List[int]
    mismatch_degree: int
