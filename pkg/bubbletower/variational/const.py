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

import numpy as np

from bubbletower.const import InputError
from bubbletower.func_core.sphere import sphere_volume

MIN_DIMENSION = 2
MAX_DIMENSION = 7


class QuadratureError(InputError):
    """Unsupported dimension, level, or concentration"""


class EnergyError(InputError):
    """Functional undefined for the given function (zero denominator)"""


class ExpansionFitError(InputError):
    """Too few concentrations or wrong dimension for an expansion fit"""


def conformal_constant(n: int) -> float:
    """c_n = 4(n-1)/(n-2) of the conformal Laplacian"""
    if n < 3:
        raise EnergyError(f"Conformal Laplacian needs n >= 3 (got {n})")

    return 4.0 * (n - 1) / (n - 2)


def scalar_curvature(n: int) -> float:
    """R = n(n-1) of the round unit sphere"""
    return float(n * (n - 1))


def critical_exponent(n: int) -> float:
    """2n/(n-2)"""
    if n < 3:
        raise EnergyError(f"Critical exponent needs n >= 3 (got {n})")

    return 2.0 * n / (n - 2)


def yamabe_sphere(n: int) -> float:
    """Y(S^n) = n(n-1) vol(S^n)^(2/n)"""
    return n * (n - 1) * sphere_volume(n) ** (2.0 / n)


@dataclass(frozen=True)
class QuadratureRule:
    """Weighted points on S^n"""

    n: int
    points: np.ndarray = field(repr=False)
    """Unit vectors (N, n+1)"""

    weights: np.ndarray = field(repr=False)
    """Positive weights (N,)"""

    level: int
    kind: str = "product"
    """product or bubble"""

    @property
    def num_points(self) -> int:
        return int(self.weights.shape[0])

    def integrate(self, values: np.ndarray) -> float:
        """Compensated weighted sum"""
        values = np.broadcast_to(np.asarray(values, dtype=float), self.weights.shape)
        return math.fsum((self.weights * values).tolist())


@dataclass
class DiscreteFunction:
    """Values and ambient tangent gradients at the points of a rule"""

    values: np.ndarray
    gradients: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise EnergyError("Function values are not finite")

    def __add__(self, other: "DiscreteFunction") -> "DiscreteFunction":
        return DiscreteFunction(
            self.values + other.values, self.gradients + other.gradients
        )

    def __sub__(self, other: "DiscreteFunction") -> "DiscreteFunction":
        return DiscreteFunction(
            self.values - other.values, self.gradients - other.gradients
        )

    def __mul__(self, scale: float) -> "DiscreteFunction":
        return DiscreteFunction(self.values * scale, self.gradients * scale)

    __rmul__ = __mul__

    def __neg__(self) -> "DiscreteFunction":
        return self * -1.0

    @property
    def is_admissible(self) -> bool:
        """In the cone u >= 0, u != 0"""
        return bool(np.all(self.values >= 0) and np.any(self.values > 0))


@dataclass(frozen=True)
class Bubble:
    """Standard solution concentrated at center with parameter lambda"""

    center: np.ndarray
    concentration: float
    n: int

    @property
    def exponent(self) -> float:
        """p = (n-2)/2"""
        return (self.n - 2) / 2.0

    @property
    def amplitude(self) -> float:
        """(n(n-1))^((n-2)/4), the constant solution of L c = c^((n+2)/(n-2))"""
        return float((self.n * (self.n - 1)) ** ((self.n - 2) / 4.0))


@dataclass
class ExpansionRow:
    concentration: float
    energy: float
    excess: float
    """J - Y/K(a)^((n-2)/n)"""

    error_estimate: float


@dataclass
class ExpansionFit:
    """Least-squares fit of the energy excess against lambda^-2"""

    center: np.ndarray
    laplacian: float
    coefficient: float
    intercept: float
    stderr: float
    t_statistic: float
    rows: typing.List[ExpansionRow] = field(default_factory=list)

    @property
    def sign(self) -> int:
        return int(np.sign(self.coefficient))

    @property
    def expected_sign(self) -> int:
        """Opposite to the sign of the Laplacian"""
        return -int(np.sign(self.laplacian))

    @property
    def consistent(self) -> bool:
        if self.expected_sign == 0:
            return True

        return self.sign == self.expected_sign
