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

import math
import typing
from dataclasses import dataclass, field
from enum import Enum

from bubbletower.const import AnalysisError, InputError

MAX_SUBSET_POINTS = 20

Subset = typing.FrozenSet[int]


class LadderError(InputError):
    """Strip ladder, spread file, or certifier parameters are malformed"""


class PartitionError(AnalysisError):
    """Signature classes and maximal energy strips disagree"""


class CertificationError(AnalysisError):
    """A certifier hypothesis failed"""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class CertificateKind(str, Enum):
    THEOREM1 = "theorem1"
    """At most one class without a solution below the energy cap"""

    COMPARISON = "comparison"
    """Existence window for the lower member of a comparable pair"""


@dataclass(frozen=True)
class StripLadder:
    """Interleaved energy strips [lower_i, upper_i], numbered from 1"""

    lower: typing.Tuple[float, ...]
    upper: typing.Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise LadderError(
                f"Ladder has {len(self.lower)} lower and {len(self.upper)} upper bounds"
            )

        if not self.lower:
            raise LadderError("Ladder has no strips")

        previous_upper = 0.0
        for i, (low, high) in enumerate(zip(self.lower, self.upper), start=1):
            if not low > previous_upper:
                raise LadderError(
                    f"Strip {i} starts at {low}, not above the previous bound {previous_upper}"
                )

            if not low <= high:
                raise LadderError(f"Strip {i} is empty ([{low}, {high}])")

            previous_upper = high

    @property
    def num_strips(self) -> int:
        return len(self.lower)

    def bounds(self, index: int) -> typing.Tuple[float, float]:
        """(lower, upper) of the 1-based strip index"""
        if not 1 <= index <= self.num_strips:
            raise LadderError(f"No strip {index} in a ladder of {self.num_strips}")

        return self.lower[index - 1], self.upper[index - 1]

    def strip_of(self, energy: float) -> typing.Optional[int]:
        """1-based strip containing energy, or None"""
        for i, (low, high) in enumerate(zip(self.lower, self.upper), start=1):
            if low <= energy <= high:
                return i

        return None

    @property
    def max_upper(self) -> float:
        return max(self.upper)


@dataclass(frozen=True)
class SpreadMember:
    """Critical point data of one candidate in a spread"""

    label: str
    values: typing.Tuple[float, ...]
    """K at every critical point"""

    laplacians: typing.Tuple[float, ...]
    morse_indices: typing.Tuple[int, ...]
    expression: typing.Optional[str] = None
    """Candidate expression, used for pointwise pinching when present"""

    def __post_init__(self):
        if not len(self.values) == len(self.laplacians) == len(self.morse_indices):
            raise LadderError(
                f"Member {self.label}: values, laplacians and morse_indices differ in length"
            )

        if any(v <= 0 for v in self.values):
            raise LadderError(f"Member {self.label}: K must be positive")

    def ordered_points(self) -> typing.List[int]:
        """Non-minimal critical points ordered by singleton energy 1/K^((n-2)/n)"""
        non_minimal = [j for j, m in enumerate(self.morse_indices) if m > 0]
        return sorted(non_minimal, key=lambda j: (-self.values[j], j))

    @property
    def signature(self) -> Subset:
        """1-based positions (in ordered_points) with negative Laplacian"""
        return frozenset(
            position
            for position, j in enumerate(self.ordered_points(), start=1)
            if self.laplacians[j] < 0
        )


@dataclass
class SpreadAudit:
    """Outcome of the spreading or spread conditions"""

    passed: bool
    messages: typing.List[str] = field(default_factory=list)
    violated_subset: typing.Optional[typing.Tuple[int, ...]] = None
    violated_member: typing.Optional[str] = None
    strip_map: typing.Dict[Subset, int] = field(default_factory=dict)


@dataclass
class Spread:
    """Validated family with a member independent strip assignment"""

    n: int
    ladder: StripLadder
    fixed_indices: typing.Tuple[int, ...]
    members: typing.List[SpreadMember]
    strip_map: typing.Dict[Subset, int]
    energy_constant: float = 1.0

    @property
    def theta(self) -> float:
        """(n-2)/n"""
        return (self.n - 2) / self.n

    @property
    def pinching_exponent(self) -> float:
        """n/(n-2)"""
        return self.n / (self.n - 2)

    def member(self, label: str) -> SpreadMember:
        for member in self.members:
            if member.label == label:
                return member

        raise LadderError(f"No spread member labeled {label}")

    def subset_energy(self, member: SpreadMember, subset: typing.Iterable[int]) -> float:
        ordered = member.ordered_points()
        total = math.fsum(
            member.values[ordered[position - 1]] ** (-(self.n - 2) / 2.0)
            for position in subset
        )
        return self.energy_constant * total ** (2.0 / self.n)

    def mu(self, member: SpreadMember) -> float:
        """Energy of the full C-(K) configuration"""
        signature = member.signature
        if not signature:
            raise LadderError(f"Member {member.label} has no critical point in C-(K)")

        return self.subset_energy(member, signature)


@dataclass
class SpreadClass:
    signature: Subset
    members: typing.List[str]
    strip: int
    """i(K~), the strip holding every mu of the class"""


@dataclass
class ClassPartition:
    """Signature classes ordered by strip"""

    classes: typing.List[SpreadClass]

    def class_of(self, label: str) -> SpreadClass:
        for spread_class in self.classes:
            if label in spread_class.members:
                return spread_class

        raise LadderError(f"Member {label} is in no class")

    @property
    def order(self) -> typing.List[int]:
        return [c.strip for c in self.classes]


@dataclass
class Certificate:
    """Outcome of a certifier with its audit trail"""

    kind: CertificateKind
    energy_bound: float
    """L"""

    window: typing.Optional[typing.Tuple[float, float]] = None
    exempt_class: typing.Optional[int] = None
    """Strip of the only class allowed an unsolvable member"""

    audit: typing.List[str] = field(default_factory=list)
    conditional_on: str = ""
