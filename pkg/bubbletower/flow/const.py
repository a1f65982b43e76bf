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

import numpy as np

from bubbletower.const import AnalysisError, InputError

UNIT_TOLERANCE = 1e-10


class FlowError(AnalysisError):
    """Integrator could not continue (step size underflow)"""


class ShadowStateError(InputError):
    """State or constants outside their valid range"""


@dataclass
class ShadowState:
    """Single-bubble parameters alpha * phi_(a, lambda) + v"""

    alpha: float
    a: np.ndarray
    """Concentration point on S^n"""

    lam: float
    """Concentration lambda > 1"""

    v_norm_sq: float
    """Models ||v||^2"""

    t: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.a.ndim != 1 or self.a.size < 3:
            raise ShadowStateError(f"a must be a point of S^n with n >= 2, got {self.a}")

        if abs(np.linalg.norm(self.a) - 1.0) > UNIT_TOLERANCE:
            raise ShadowStateError(f"|a| = {np.linalg.norm(self.a)} is not 1")

        if not self.alpha > 0:
            raise ShadowStateError(f"alpha must be positive (got {self.alpha})")

        if not self.lam > 1:
            raise ShadowStateError(f"lambda must exceed 1 (got {self.lam})")

        if self.v_norm_sq < 0:
            raise ShadowStateError(f"||v||^2 must be nonnegative (got {self.v_norm_sq})")

    @property
    def n(self) -> int:
        return self.a.size - 1

    def pack(self) -> np.ndarray:
        """[alpha, a_0..a_n, lambda, v^2]"""
        return np.concatenate([[self.alpha], self.a, [self.lam, self.v_norm_sq]])

    @staticmethod
    def unpack(vector: np.ndarray, t: float = 0.0) -> "ShadowState":
        return ShadowState(
            alpha=float(vector[0]),
            a=np.array(vector[1:-2]),
            lam=float(vector[-2]),
            v_norm_sq=float(vector[-1]),
            t=t,
        )


@dataclass(frozen=True)
class FlowConstants:
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    b: float = 1.0
    """Coefficient of the majorant |grad K|^2 / lambda^2 + 1 / lambda^4"""

    coupling: bool = False
    """Include the O(||v||^2) term in the lambda equation"""

    coupling_coefficient: float = 0.0
    max_coupling: float = 1.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "b"):
            if not getattr(self, name) > 0:
                raise ShadowStateError(f"{name} must be positive (got {getattr(self, name)})")

        if not 0 <= abs(self.coupling_coefficient) <= self.max_coupling:
            raise ShadowStateError(
                f"|coupling_coefficient| = {abs(self.coupling_coefficient)} "
                f"exceeds {self.max_coupling}"
            )

    @staticmethod
    def from_config(config: typing.Mapping[str, typing.Any]) -> "FlowConstants":
        return FlowConstants(
            c1=float(config.get("c1", 1.0)),
            c2=float(config.get("c2", 1.0)),
            c3=float(config.get("c3", 1.0)),
            b=float(config.get("b", 1.0)),
            coupling=bool(config.get("coupling", False)),
            coupling_coefficient=float(config.get("coupling_coefficient", 0.0)),
            max_coupling=float(config.get("max_coupling", 1.0)),
        )


@dataclass(frozen=True)
class IntegratorSettings:
    tolerance: float = 1e-8
    """Mixed absolute/relative local error per step"""

    initial_step: float = 1e-2
    min_step: float = 1e-12
    max_step: float = 1.0
    safety: float = 0.9
    lambda_cap: float = 1e8
    """Declared concentrated above this lambda"""

    lambda_floor: float = 1.0 + 1e-6
    num_outputs: int = 200

    @staticmethod
    def from_config(config: typing.Mapping[str, typing.Any]) -> "IntegratorSettings":
        return IntegratorSettings(
            tolerance=float(config.get("tolerance", 1e-8)),
            initial_step=float(config.get("initial_step", 1e-2)),
            min_step=float(config.get("min_step", 1e-12)),
            max_step=float(config.get("max_step", 1.0)),
            lambda_cap=float(config.get("lambda_cap", 1e8)),
            num_outputs=int(config.get("num_outputs", 200)),
        )


class StopReason(str, Enum):
    HORIZON = "horizon"
    CONCENTRATED = "concentrated"
    """lambda reached the cap"""

    DECONCENTRATED = "deconcentrated"
    """lambda fell to the floor"""


@dataclass
class Trajectory:
    """Samples of the shadow flow at the output times"""

    times: np.ndarray
    alpha: np.ndarray
    a: np.ndarray
    """(num_samples, n + 1)"""

    lam: np.ndarray
    v_norm_sq: np.ndarray
    stop_reason: StopReason = StopReason.HORIZON
    error_estimate: float = 0.0
    """Accumulated local error in (a, ln lambda)"""

    num_steps: int = 0
    rejected_steps: int = 0

    @property
    def log_lambda(self) -> np.ndarray:
        return np.log(self.lam)

    @property
    def num_samples(self) -> int:
        return len(self.times)

    def state(self, index: int) -> ShadowState:
        return ShadowState(
            alpha=float(self.alpha[index]),
            a=self.a[index],
            lam=float(self.lam[index]),
            v_norm_sq=float(self.v_norm_sq[index]),
            t=float(self.times[index]),
        )

    @property
    def final(self) -> ShadowState:
        return self.state(self.num_samples - 1)


@dataclass
class MonitorReport:
    """Concentration invariants along a trajectory"""

    monotone_applicable: bool
    """Laplacian of K negative at every sample"""

    monotone_ok: typing.Optional[bool]
    """K^-1(a) ln(lambda) nondecreasing; None when not applicable"""

    v_bound_ok: bool
    v_bound_constant: float
    """C_v after the transient"""

    transient_time: typing.Optional[float]
    estimated_transient: float
    """2 ln(|v0| / bound0) / c3 from the decay rate"""

    concentration_ok: bool
    lambda_initial: float
    lambda_final: float
    monotone_violations: typing.List[int] = field(default_factory=list)
    messages: typing.List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.monotone_ok is not False) and self.v_bound_ok and self.concentration_ok
