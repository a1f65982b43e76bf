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


class ExpressionError(InputError):
    """Syntax or dimension error in a candidate expression"""

    def __init__(self, message: str, column: typing.Optional[int] = None):
        super().__init__(message)
        self.column = column


class CandidateError(InputError):
    """Candidate function is not positive or not evaluable on the sphere"""


class DegeneracyError(AnalysisError):
    """A converged critical point violates the Morse or Laplacian tolerance"""

    def __init__(self, message: str, location: typing.Optional[np.ndarray] = None):
        super().__init__(message)
        self.location = location


class CriticalPointError(AnalysisError):
    """Critical point search produced an inconsistent catalog"""


class SurgeryError(InputError):
    """Laplacian surgery precondition violated"""


class SurgeryAdmissibilityError(AnalysisError):
    """Patched function failed a post-surgery check"""


@dataclass(frozen=True)
class SphereSpec:
    """Round unit sphere S^n embedded in R^(n+1)"""

    n: int
    """Intrinsic dimension"""

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"Sphere dimension must be >= 2 (got {self.n})")

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    @property
    def is_high_dim(self) -> bool:
        return self.n >= 5

    @property
    def is_single_bubble(self) -> bool:
        return self.n in (2, 3)

    def require_high_dim(self, single_bubble_ok: bool = False) -> None:
        """Reject dimensions outside the n >= 5 Morse regime"""
        if self.is_high_dim:
            return

        if single_bubble_ok and self.is_single_bubble:
            return

        raise InputError(
            f"Operation requires n >= 5 (got n={self.n}); "
            "select single-bubble mode for n in {2, 3}"
        )


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances of the critical point search"""

    gradient: float = 1e-10
    """Intrinsic gradient norm accepted as converged"""

    merge: float = 1e-6
    """Geodesic distance below which two points are the same"""

    degeneracy: float = 1e-6
    """Relative bound on |eigenvalue| and |Laplacian| (times Hessian scale)"""

    max_newton_steps: int = 60

    max_step: float = 0.5
    """Largest geodesic Newton step"""

    @staticmethod
    def from_config(config: typing.Mapping[str, typing.Any]) -> "Tolerances":
        return Tolerances(
            gradient=float(config.get("gradient_tolerance", 1e-10)),
            merge=float(config.get("merge_tolerance", 1e-6)),
            degeneracy=float(config.get("degeneracy_tolerance", 1e-6)),
            max_newton_steps=int(config.get("max_newton_steps", 60)),
            max_step=float(config.get("max_step", 0.5)),
        )


@dataclass(frozen=True)
class CriticalPoint:
    """Non-degenerate critical point of a candidate function"""

    location: np.ndarray
    """Unit vector in R^(n+1)"""

    value: float
    """K(x) > 0"""

    morse_index: int
    """Number of negative intrinsic Hessian eigenvalues, m(K, x)"""

    laplacian: float
    """Laplace-Beltrami value at x"""

    hessian_eigenvalues: np.ndarray
    """Ascending eigenvalues of the intrinsic Hessian"""

    hessian_eigenvectors: np.ndarray = field(repr=False, compare=False)
    """Ambient unit tangent vectors as columns, matching eigenvalue order"""

    gradient_norm: float = 0.0

    @property
    def n(self) -> int:
        return int(self.location.shape[0]) - 1

    @property
    def inverse_index(self) -> int:
        """m(1/K, x) = n - m(K, x)"""
        return self.n - self.morse_index

    @property
    def is_maximum(self) -> bool:
        return self.morse_index == self.n

    @property
    def is_minimum(self) -> bool:
        return self.morse_index == 0

    @property
    def is_extremal(self) -> bool:
        return self.is_maximum or self.is_minimum


@dataclass(frozen=True)
class SurgeryPatch:
    """Local modification of the Hessian at a critical point"""

    center: np.ndarray
    """x0 on the sphere"""

    radius: float
    """delta; the blend is supported in the 2*delta ball"""

    coefficients: np.ndarray
    """Target half-eigenvalues c, ascending eigenvalue order of the base"""

    epsilon: float
    """Relative bound |c_j - b_j| <= epsilon |b_j|"""

    base_coefficients: np.ndarray
    """Half-eigenvalues b of the base Hessian at x0"""

    directions: np.ndarray = field(repr=False, compare=False)
    """Ambient tangent eigenvectors e_j at x0 as columns"""

    @property
    def shifts(self) -> np.ndarray:
        """d = c - b, coefficients of the added quadratic form"""
        return self.coefficients - self.base_coefficients


@dataclass
class AdmissibilityReport:
    """Outcome of the positivity, Morse, and Laplacian checks"""

    positive: bool
    morse: bool
    laplacian_separated: bool
    margin: float
    """min over critical points of |Laplacian|"""

    min_value: float
    """Smallest sampled value of K"""

    index_counts: typing.Dict[int, int] = field(default_factory=dict)
    euler_sum: int = 0
    euler_expected: int = 0
    morse_inequalities: bool = True
    messages: typing.List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.positive and self.morse and self.laplacian_separated
