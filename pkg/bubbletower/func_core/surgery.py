"""Local change of the Hessian at a non-extremal critical point.

The patched function is

    K~ = K + (1 - eta(rho / delta)) * sum_j (c_j - b_j) <x, e_j>^2

where b_j are half the Hessian eigenvalues of K at x0, e_j the matching
eigenvectors and rho the geodesic distance to x0. The quadric leaves the
gradient at x0 untouched and moves the Hessian eigenvalues to 2 c_j, so the
Laplacian at x0 becomes 2 * sum_j c_j. The blend term is supported in the
2 delta ball.
"""
import logging
import math
import typing
from dataclasses import dataclass, field

import numpy as np

from .candidate import CandidateFunction, laplace_beltrami
from .const import (
    CriticalPoint,
    CriticalPointError,
    DegeneracyError,
    SurgeryAdmissibilityError,
    SurgeryError,
    SurgeryPatch,
    Tolerances,
)
from .critical import find_critical_points
from .sphere import geodesic_ball_samples, geodesic_distance, product_grid

_LOGGER = logging.getLogger(__name__)

# Slack on |c_j - b_j| <= epsilon |b_j| for coefficients computed in floating point
_COEFFICIENT_SLACK = 1e-12


@dataclass
class SurgeryReport:
    """Post-surgery checks"""

    center: np.ndarray
    laplacian_before: float
    laplacian_after: float
    laplacian_target: float
    value_shift: float
    """|K~(x0) - K(x0)|"""

    sup_deviation: float
    """max |K~ - K| over the samples"""

    sup_constant: float
    """sup_deviation / (epsilon * delta^2)"""

    outside_deviation: float
    """max |K~ - K| over samples outside the 2 delta ball"""

    critical_set_preserved: typing.Optional[bool] = None
    critical_points: typing.List[CriticalPoint] = field(default_factory=list)
    messages: typing.List[str] = field(default_factory=list)

    @property
    def laplacian_error(self) -> float:
        return abs(self.laplacian_after - self.laplacian_target) / max(
            1.0, abs(self.laplacian_target)
        )

    @property
    def passed(self) -> bool:
        return (not self.messages) and (self.critical_set_preserved is not False)


def laplacian_surgery(
    candidate: CandidateFunction,
    center: CriticalPoint,
    coefficients: typing.Sequence[float],
    delta: float,
    epsilon: float,
    critical_points: typing.Optional[typing.Sequence[CriticalPoint]] = None,
    verify: bool = True,
    grid_resolution: int = 6,
    tolerances: typing.Optional[Tolerances] = None,
) -> CandidateFunction:
    """Patch K near center so that its Hessian half-eigenvalues become c"""
    patch = make_patch(
        candidate,
        center,
        coefficients,
        delta,
        epsilon,
        critical_points=critical_points,
        grid_resolution=grid_resolution,
        tolerances=tolerances,
    )
    patched = candidate.with_patch(patch)
    _LOGGER.debug(
        "Patched %s at %s (delta=%s, epsilon=%s)",
        candidate.text,
        center.location.tolist(),
        delta,
        epsilon,
    )

    if verify:
        report = verify_surgery(
            candidate,
            patched,
            patch,
            critical_points=critical_points,
            grid_resolution=grid_resolution,
            tolerances=tolerances,
        )
        if not report.passed:
            raise SurgeryAdmissibilityError("; ".join(report.messages))

    return patched


def make_patch(
    candidate: CandidateFunction,
    center: CriticalPoint,
    coefficients: typing.Sequence[float],
    delta: float,
    epsilon: float,
    critical_points: typing.Optional[typing.Sequence[CriticalPoint]] = None,
    grid_resolution: int = 6,
    tolerances: typing.Optional[Tolerances] = None,
) -> SurgeryPatch:
    """Check surgery preconditions and build the patch"""
    if center.is_extremal:
        raise SurgeryError(
            f"Surgery point {center.location.tolist()} is extremal "
            f"(Morse index {center.morse_index})"
        )

    if not 0 < delta < math.pi / 2:
        raise SurgeryError(f"delta must be in (0, pi/2) (got {delta})")

    if not 0 < epsilon < 1:
        raise SurgeryError(
            f"epsilon must be in (0, 1) so that each c_j keeps the sign of b_j "
            f"(got {epsilon})"
        )

    target = np.asarray(coefficients, dtype=float)
    if target.shape != (candidate.n,):
        raise SurgeryError(
            f"Expected {candidate.n} coefficients (got {target.shape[0] if target.ndim else 0})"
        )

    base = 0.5 * center.hessian_eigenvalues
    allowed = epsilon * np.abs(base) * (1.0 + _COEFFICIENT_SLACK) + _COEFFICIENT_SLACK
    violations = np.flatnonzero(np.abs(target - base) > allowed)
    if len(violations) > 0:
        j = int(violations[0])
        raise SurgeryError(
            f"|c_{j + 1} - b_{j + 1}| = {abs(target[j] - base[j])} exceeds "
            f"epsilon |b_{j + 1}| = {epsilon * abs(base[j])}"
        )

    if critical_points is None:
        critical_points = find_critical_points(candidate, grid_resolution, tolerances)

    for other in critical_points:
        distance = float(geodesic_distance(other.location, center.location))
        if distance < 1e-9:
            # The center itself
            continue

        if distance < 2 * delta:
            raise SurgeryError(
                f"Critical point {other.location.tolist()} lies within 2*delta "
                f"of the surgery point (distance {distance})"
            )

    return SurgeryPatch(
        center=center.location.copy(),
        radius=float(delta),
        coefficients=target,
        epsilon=float(epsilon),
        base_coefficients=base,
        directions=center.hessian_eigenvectors.copy(),
    )


def surgery_samples(candidate: CandidateFunction, patch: SurgeryPatch) -> np.ndarray:
    """Global grid plus dense samples around the patch"""
    global_points, _ = product_grid(candidate.n, 6 if candidate.n <= 4 else 4)
    local_points = geodesic_ball_samples(patch.center, 2.5 * patch.radius, num_radii=25)
    return np.concatenate([global_points, local_points], axis=0)


def verify_surgery(
    base: CandidateFunction,
    patched: CandidateFunction,
    patch: SurgeryPatch,
    critical_points: typing.Optional[typing.Sequence[CriticalPoint]] = None,
    grid_resolution: int = 6,
    tolerances: typing.Optional[Tolerances] = None,
    search: bool = True,
) -> SurgeryReport:
    """Laplacian at x0, sup-norm deviation and the critical set of K~"""
    tolerances = tolerances or Tolerances()
    messages: typing.List[str] = []
    center = patch.center

    laplacian_before = float(laplace_beltrami(base, center))
    laplacian_after = float(laplace_beltrami(patched, center))
    laplacian_target = 2.0 * float(np.sum(patch.coefficients))
    value_shift = abs(patched(center) - base(center))

    samples = surgery_samples(base, patch)
    deviation = np.abs(patched.values(samples) - base.values(samples))
    sup_deviation = float(np.max(deviation))
    outside = geodesic_distance(samples, center[None, :]) > 2 * patch.radius
    outside_deviation = float(np.max(deviation[outside], initial=0.0))
    sup_constant = sup_deviation / (patch.epsilon * patch.radius**2)

    if abs(laplacian_after - laplacian_target) > 1e-4 * max(1.0, abs(laplacian_target)):
        messages.append(
            f"Laplacian after surgery {laplacian_after} differs from 2*sum(c) = {laplacian_target}"
        )

    if value_shift > 1e-12:
        messages.append(f"Surgery moved K(x0) by {value_shift}")

    if outside_deviation > 1e-12:
        messages.append(f"Patch leaks outside the 2*delta ball ({outside_deviation})")

    report = SurgeryReport(
        center=center,
        laplacian_before=laplacian_before,
        laplacian_after=laplacian_after,
        laplacian_target=laplacian_target,
        value_shift=value_shift,
        sup_deviation=sup_deviation,
        sup_constant=sup_constant,
        outside_deviation=outside_deviation,
        messages=messages,
    )

    if not search:
        return report

    if critical_points is None:
        critical_points = find_critical_points(base, grid_resolution, tolerances)

    try:
        patched_points = find_critical_points(patched, grid_resolution, tolerances)
    except (DegeneracyError, CriticalPointError) as err:
        messages.append(f"Patched function is not admissible: {err}")
        report.critical_set_preserved = False
        return report

    report.critical_points = patched_points
    report.critical_set_preserved = _same_critical_set(
        critical_points, patched_points, tolerances.merge
    )
    if not report.critical_set_preserved:
        messages.append(
            f"Critical set changed: {len(critical_points)} point(s) before, "
            f"{len(patched_points)} after"
        )

    return report


def _same_critical_set(
    before: typing.Sequence[CriticalPoint],
    after: typing.Sequence[CriticalPoint],
    merge_tolerance: float,
) -> bool:
    if len(before) != len(after):
        return False

    for point in before:
        matches = [
            other
            for other in after
            if float(geodesic_distance(point.location, other.location)) < merge_tolerance
        ]
        if len(matches) != 1:
            return False

        if matches[0].morse_index != point.morse_index:
            return False

    return True
