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
import math
import typing

import numpy as np

from bubbletower.func_core import CandidateFunction, intrinsic_gradient, laplace_beltrami
from bubbletower.func_core.sphere import normalize, tangent_projection

from .const import (
    FlowConstants,
    FlowError,
    IntegratorSettings,
    MonitorReport,
    ShadowState,
    ShadowStateError,
    StopReason,
    Trajectory,
)
from .rkf45 import error_ratio, next_step, rkf45_step

_LOGGER = logging.getLogger(__name__)

DEFAULT_MONOTONE_TOLERANCE = 1e-9
DEFAULT_V_BOUND_FACTOR = 2.0


def _derivative(
    y: np.ndarray, candidate: CandidateFunction, constants: FlowConstants
) -> np.ndarray:
    a = normalize(y[1:-2])
    lam, v_norm_sq = y[-2], y[-1]

    value = candidate(a)
    gradient = intrinsic_gradient(candidate, a)
    laplacian = laplace_beltrami(candidate, a)
    weight = value**1.25

    a_dot = -constants.c1 * gradient / (weight * lam**2)
    lam_dot = -constants.c2 * laplacian / (weight * lam)
    if constants.coupling:
        lam_dot += constants.coupling_coefficient * lam * v_norm_sq

    grad_sq = float(np.dot(gradient, gradient))
    v_dot = -constants.c3 * v_norm_sq + constants.b * (grad_sq / lam**2 + 1.0 / lam**4)

    return np.concatenate([[0.0], a_dot, [lam_dot, v_dot]])


def shadow_rhs(
    state: ShadowState, candidate: CandidateFunction, constants: FlowConstants
) -> np.ndarray:
    """Leading-order derivative, packed like ShadowState.pack()"""
    if state.n != candidate.n:
        raise ShadowStateError(f"State lives on S^{state.n}, candidate on S^{candidate.n}")

    return _derivative(state.pack(), candidate, constants)


def integrate(
    start: ShadowState,
    candidate: CandidateFunction,
    constants: FlowConstants,
    horizon: float,
    settings: typing.Optional[IntegratorSettings] = None,
    output_times: typing.Optional[typing.Sequence[float]] = None,
) -> Trajectory:
    """Adaptive RKF45 with a renormalized to the sphere after every step"""
    settings = settings or IntegratorSettings()
    if start.n != candidate.n:
        raise ShadowStateError(f"State lives on S^{start.n}, candidate on S^{candidate.n}")

    if not horizon > 0:
        raise ShadowStateError(f"Horizon must be positive (got {horizon})")

    if output_times is None:
        times = np.linspace(start.t, start.t + horizon, settings.num_outputs + 1)
    else:
        times = np.asarray(sorted(output_times), dtype=float)
        if times[0] != start.t:
            times = np.concatenate([[start.t], times[times > start.t]])

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        return _derivative(y, candidate, constants)

    y = start.pack()
    t = float(start.t)
    samples = [y.copy()]
    sample_times = [t]
    h = min(settings.initial_step, settings.max_step)
    stop_reason = StopReason.HORIZON
    error_estimate = 0.0
    num_steps = 0
    rejected_steps = 0
    target_index = 1

    while target_index < len(times):
        target = float(times[target_index])
        step = min(h, target - t)
        truncated = step < h

        y_new, error = rkf45_step(rhs, t, y, step)
        ratio = error_ratio(error, y, y_new, settings.tolerance)
        if not math.isfinite(ratio):
            ratio = math.inf

        if ratio > 1.0:
            rejected_steps += 1
            h = step * 0.2 if math.isinf(ratio) else next_step(step, ratio, settings.safety)
            _LOGGER.debug("Rejected step at t=%s (error ratio %s)", t, ratio)
            if h < settings.min_step:
                raise FlowError(f"Step size underflow at t={t} (h={h})")

            continue

        y_new[1:-2] = normalize(y_new[1:-2])
        y_new[-1] = max(y_new[-1], 0.0)
        if y_new[-2] <= settings.lambda_floor:
            stop_reason = StopReason.DECONCENTRATED
            break

        error_estimate += max(
            float(np.max(np.abs(error[1:-2]))), abs(float(error[-2])) / y_new[-2]
        )
        t = target if step == target - t else t + step
        y = y_new
        num_steps += 1

        h_next = next_step(step, ratio, settings.safety)
        h = min(max(h, h_next) if truncated else h_next, settings.max_step)

        if t == target:
            samples.append(y.copy())
            sample_times.append(t)
            target_index += 1

        if y[-2] >= settings.lambda_cap:
            stop_reason = StopReason.CONCENTRATED
            break

    if sample_times[-1] != t:
        samples.append(y.copy())
        sample_times.append(t)

    stacked = np.stack(samples)
    _LOGGER.debug(
        "Integrated to t=%s in %s step(s) (%s rejected, %s)",
        t,
        num_steps,
        rejected_steps,
        stop_reason.value,
    )

    return Trajectory(
        times=np.array(sample_times),
        alpha=stacked[:, 0],
        a=stacked[:, 1:-2],
        lam=stacked[:, -2],
        v_norm_sq=stacked[:, -1],
        stop_reason=stop_reason,
        error_estimate=error_estimate,
        num_steps=num_steps,
        rejected_steps=rejected_steps,
    )


def _sample_fields(
    trajectory: Trajectory, candidate: CandidateFunction
) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """K, Laplacian and |grad K| at every sample"""
    points = normalize(trajectory.a)
    values = candidate.values(points)
    laplacians = np.asarray(laplace_beltrami(candidate, points))
    gradient_norms = np.linalg.norm(intrinsic_gradient(candidate, points), axis=-1)

    return values, laplacians, gradient_norms


def concentration_quantity(trajectory: Trajectory, values: np.ndarray) -> np.ndarray:
    """K^-1(a(t)) ln(lambda(t))"""
    return trajectory.log_lambda / values


def monitor_invariants(
    trajectory: Trajectory,
    candidate: CandidateFunction,
    constants: typing.Optional[FlowConstants] = None,
    monotone_tolerance: float = DEFAULT_MONOTONE_TOLERANCE,
    v_bound_factor: float = DEFAULT_V_BOUND_FACTOR,
) -> MonitorReport:
    """Monotone concentration, the v majorant after the transient, and lambda(T) > lambda(0)"""
    constants = constants or FlowConstants()
    values, laplacians, gradient_norms = _sample_fields(trajectory, candidate)
    messages: typing.List[str] = []

    # (1) monotone K^-1(a) ln(lambda)
    applicable = bool(np.all(laplacians < 0))
    violations: typing.List[int] = []
    monotone_ok: typing.Optional[bool] = None
    if applicable:
        steps = np.diff(concentration_quantity(trajectory, values))
        violations = [int(i) + 1 for i in np.nonzero(steps < -monotone_tolerance)[0]]
        monotone_ok = not violations
        if violations:
            messages.append(
                f"K^-1(a) ln(lambda) decreases at {len(violations)} sample(s), "
                f"first at t={trajectory.times[violations[0]]}"
            )
    else:
        messages.append("Laplacian of K is not negative along the path; monotonicity not checked")

    # (2) sqrt(v^2) <= C_v (|grad K| / lambda + 1 / lambda^2)
    bound = gradient_norms / trajectory.lam + 1.0 / trajectory.lam**2
    ratios = np.sqrt(trajectory.v_norm_sq) / bound
    scale = v_bound_factor * math.sqrt(constants.b / constants.c3)
    inside = ratios <= scale

    transient_index: typing.Optional[int] = None
    for i in range(len(inside)):
        if np.all(inside[i:]):
            transient_index = i
            break

    if transient_index is None:
        v_bound_ok = False
        transient_time = None
        v_bound_constant = float(ratios[-1])
        messages.append(f"v exceeds {scale} times its majorant at the final sample")
    else:
        v_bound_ok = True
        transient_time = float(trajectory.times[transient_index])
        v_bound_constant = float(np.max(ratios[transient_index:]))

    v0 = math.sqrt(trajectory.v_norm_sq[0])
    bound0 = math.sqrt(constants.b / constants.c3) * bound[0]
    estimated_transient = (
        max(0.0, 2.0 * math.log(v0 / bound0) / constants.c3) if v0 > 0 else 0.0
    )

    # (3) terminal concentration
    lambda_initial = float(trajectory.lam[0])
    lambda_final = float(trajectory.lam[-1])
    concentration_ok = lambda_final > lambda_initial
    if not concentration_ok:
        messages.append(f"lambda(T) = {lambda_final} does not exceed lambda(0) = {lambda_initial}")

    return MonitorReport(
        monotone_applicable=applicable,
        monotone_ok=monotone_ok,
        v_bound_ok=v_bound_ok,
        v_bound_constant=v_bound_constant,
        transient_time=transient_time,
        estimated_transient=estimated_transient,
        concentration_ok=concentration_ok,
        lambda_initial=lambda_initial,
        lambda_final=lambda_final,
        monotone_violations=violations,
        messages=messages,
    )


def perturbed_start(
    point: np.ndarray,
    offset: float,
    lam: float,
    v_norm_sq: float = 0.0,
    alpha: float = 1.0,
    rng: typing.Optional[np.random.Generator] = None,
) -> ShadowState:
    """State with a moved off point by a random tangent vector of length offset"""
    point = normalize(np.asarray(point, dtype=float))
    rng = rng or np.random.default_rng(0)
    direction = tangent_projection(point, rng.normal(size=point.shape))
    norm = np.linalg.norm(direction)
    if norm > 0:
        direction = direction / norm

    return ShadowState(
        alpha=alpha,
        a=normalize(point + offset * direction),
        lam=lam,
        v_norm_sq=v_norm_sq,
    )


def ensemble(
    starts: typing.Sequence[ShadowState],
    candidate: CandidateFunction,
    constants: FlowConstants,
    horizon: float,
    settings: typing.Optional[IntegratorSettings] = None,
) -> typing.List[Trajectory]:
    """Integrate several initial conditions with the same settings"""
    trajectories = []
    for i, start in enumerate(starts):
        _LOGGER.debug("Ensemble member %s/%s", i + 1, len(starts))
        trajectories.append(integrate(start, candidate, constants, horizon, settings))

    return trajectories


def trajectory_header(n: int) -> typing.List[str]:
    return (
        ["t"]
        + [f"a{i}" for i in range(n + 1)]
        + ["lambda", "log_lambda", "v_norm_sq", "K", "laplacian", "laplacian_negative"]
        + ["monotone_step"]
    )


def trajectory_rows(
    trajectory: Trajectory,
    candidate: CandidateFunction,
    monotone_tolerance: float = DEFAULT_MONOTONE_TOLERANCE,
) -> typing.List[typing.List[typing.Any]]:
    """One CSV row per sample, matching trajectory_header"""
    values, laplacians, _ = _sample_fields(trajectory, candidate)
    quantity = concentration_quantity(trajectory, values)
    rows = []
    for i in range(trajectory.num_samples):
        monotone = (i == 0) or (quantity[i] - quantity[i - 1] >= -monotone_tolerance)
        rows.append(
            [repr(float(trajectory.times[i]))]
            + [repr(float(x)) for x in trajectory.a[i]]
            + [
                repr(float(trajectory.lam[i])),
                repr(float(trajectory.log_lambda[i])),
                repr(float(trajectory.v_norm_sq[i])),
                repr(float(values[i])),
                repr(float(laplacians[i])),
                int(laplacians[i] < 0),
                int(monotone),
            ]
        )

    return rows
