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
from enum import Enum

from bubbletower.const import InputError
from bubbletower.func_core import CriticalPoint

MAX_ENUMERATED = 20


class InfinityError(InputError):
    """Unsupported dimension, empty C-(K), or enumeration cap exceeded"""


class CatalogMode(str, Enum):
    """How critical points at infinity are built from C-(K)"""

    HIGH_DIM = "high_dim"
    """n >= 5: one CPI per nonempty subset"""

    SINGLE_BUBBLE = "single_bubble"
    """n in {2, 3}: one CPI per point"""


def catalog_mode(n: int) -> CatalogMode:
    if n >= 5:
        return CatalogMode.HIGH_DIM

    if n in (2, 3):
        return CatalogMode.SINGLE_BUBBLE

    raise InfinityError(
        f"n={n} is the balanced case where the Laplacian and mass terms "
        "interact at the same order; it is not supported"
    )


@dataclass(frozen=True)
class CatalogPoint:
    """Critical point data needed at infinity"""

    label: str
    value: float
    """K(x) > 0"""

    morse_index: int
    laplacian: float


@dataclass
class CriticalCatalog:
    """Labeled critical points of one candidate"""

    n: int
    points: typing.List[CatalogPoint]
    mode: CatalogMode = field(init=False)

    def __post_init__(self):
        self.mode = catalog_mode(self.n)

        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise InfinityError(f"Duplicate labels in catalog: {labels}")

        for point in self.points:
            if point.laplacian == 0:
                raise InfinityError(f"Laplacian vanishes at {point.label}")

            if point.value <= 0:
                raise InfinityError(f"K is not positive at {point.label}")

            if not 0 <= point.morse_index <= self.n:
                raise InfinityError(
                    f"Morse index {point.morse_index} of {point.label} outside [0, {self.n}]"
                )

    @staticmethod
    def from_critical_points(
        n: int,
        points: typing.Sequence[CriticalPoint],
        labels: typing.Optional[typing.Sequence[str]] = None,
    ) -> "CriticalCatalog":
        if labels is None:
            labels = [f"p{i}" for i in range(len(points))]

        return CriticalCatalog(
            n=n,
            points=[
                CatalogPoint(
                    label=label,
                    value=p.value,
                    morse_index=p.morse_index,
                    laplacian=p.laplacian,
                )
                for label, p in zip(labels, points)
            ],
        )

    def point(self, label: str) -> CatalogPoint:
        for p in self.points:
            if p.label == label:
                return p

        raise InfinityError(f"No critical point labeled {label}")


@dataclass(frozen=True)
class CPI:
    """Pure critical point at infinity"""

    mask: int
    """Bitmask over C-(K) in catalog order"""

    members: typing.Tuple[str, ...]
    energy: float
    index: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def parity(self) -> int:
        return -1 if self.index % 2 else 1


@dataclass(frozen=True)
class StructurePoint:
    """One critical point of a Morse structure with its Laplacian sign constraint"""

    label: str
    morse_index: int
    forced: typing.Optional[bool] = None
    """True: in C-(K), False: excluded, None: free"""


@dataclass(frozen=True)
class CancellationPair:
    """CPIs without and with a chosen maximum"""

    without: CPI
    with_maximum: CPI
