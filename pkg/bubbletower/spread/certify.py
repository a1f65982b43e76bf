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
from dataclasses import dataclass

import numpy as np

from bubbletower.func_core import (
    CandidateFunction,
    SphereSpec,
    find_critical_points,
    parse_candidate,
)
from bubbletower.func_core.sphere import product_grid

from .const import (
    Certificate,
    CertificateKind,
    CertificationError,
    ClassPartition,
    LadderError,
    Spread,
    SpreadMember,
)
from .partition import sigma

_LOGGER = logging.getLogger(__name__)

DEFAULT_SLACK_MARGIN = 1e-3

# Seeds per angle of the grid that pointwise pinching is checked on
PINCHING_GRID_RESOLUTION = 4


@dataclass
class PinchingResult:
    passed: bool
    margin: float
    """Smallest relative distance to either bound"""

    where: str = ""
    pointwise: bool = False
    """True when both members were evaluated at shared points of S^n"""

    @property
    def scope(self) -> str:
        return "pointwise" if self.pointwise else "critical values only"


def _critical_locations(candidate: CandidateFunction) -> np.ndarray:
    points = find_critical_points(candidate, PINCHING_GRID_RESOLUTION)
    return np.array([p.location for p in points]).reshape(-1, candidate.n + 1)


def _member_samples(
    first: SpreadMember, second: SpreadMember, n: int
) -> typing.List[typing.Tuple[str, np.ndarray, np.ndarray]]:
    """(description, K1 values, K2 values) at comparable points"""
    first_order = first.ordered_points()
    second_order = second.ordered_points()
    if len(first_order) != len(second_order):
        raise LadderError(
            f"Members {first.label} and {second.label} have different critical point counts"
        )

    # Critical values correspond through the shared Morse structure
    samples = [
        (
            "critical values",
            np.array([first.values[j] for j in first_order]),
            np.array([second.values[j] for j in second_order]),
        )
    ]

    if first.expression and second.expression:
        spec = SphereSpec(n)
        first_candidate = parse_candidate(first.expression, spec, validate=False)
        second_candidate = parse_candidate(second.expression, spec, validate=False)

        grid, _ = product_grid(n, PINCHING_GRID_RESOLUTION)
        points = np.concatenate(
            [
                grid,
                _critical_locations(first_candidate),
                _critical_locations(second_candidate),
            ]
        )
        samples.append(
            (
                "sample points",
                first_candidate.values(points),
                second_candidate.values(points),
            )
        )

    return samples


def pinching(
    upper: SpreadMember,
    lower: SpreadMember,
    kappa_low: float,
    kappa_high: float,
    n: int,
) -> PinchingResult:
    """K1 / kappa_high^(n/(n-2)) < K2 < K1 / kappa_low^(n/(n-2)) for K1=upper, K2=lower"""
    exponent = n / (n - 2.0)
    margin = np.inf
    samples = _member_samples(upper, lower, n)
    pointwise = len(samples) > 1
    for description, first_values, second_values in samples:
        floor = first_values / kappa_high**exponent
        ceiling = first_values / kappa_low**exponent
        relative = np.minimum(
            (second_values - floor) / first_values,
            (ceiling - second_values) / first_values,
        )
        worst = int(np.argmin(relative))
        margin = min(margin, float(relative[worst]))
        if relative[worst] <= 0:
            return PinchingResult(
                passed=False,
                margin=float(relative[worst]),
                where=f"{upper.label} vs {lower.label} at {description} #{worst}",
                pointwise=pointwise,
            )

    return PinchingResult(passed=True, margin=float(margin), pointwise=pointwise)


def _check_kappas(kappa_low: float, kappa_high: float):
    if not 0 < kappa_low < 1 < kappa_high:
        raise LadderError(
            f"Comparison constants must satisfy 0 < {kappa_low} < 1 < {kappa_high}"
        )


def theorem1_certify(
    spread: Spread,
    class_partition: ClassPartition,
    kappa_low: float,
    kappa_high: float,
    solvable: typing.Optional[typing.Mapping[str, bool]] = None,
) -> Certificate:
    """At most one class can hold a member without a solution below L"""
    _check_kappas(kappa_low, kappa_high)
    ladder = spread.ladder
    ratio = kappa_high / kappa_low
    audit: typing.List[str] = []

    # (a) gap between each occupied strip and the strip below it
    gap_ratios = []
    for spread_class in class_partition.classes:
        i = spread_class.strip
        if i <= 1:
            continue

        gap = ladder.bounds(i)[0] / ladder.bounds(i - 1)[1]
        gap_ratios.append((gap, i))

    if gap_ratios:
        min_gap, min_strip = min(gap_ratios)
        if not ratio < min_gap:
            raise CertificationError(
                "gap",
                f"kappa_high/kappa_low = {ratio} is not below "
                f"k_low[{min_strip}]/k_high[{min_strip - 1}] = {min_gap}",
            )

        audit.append(f"gap: {ratio} < {min_gap} (strips {min_strip - 1}, {min_strip})")
    else:
        audit.append("gap: no occupied strip above the first")

    # (b) pairwise pinching
    min_margin = np.inf
    pointwise = True
    for first in spread.members:
        for second in spread.members:
            if first is second:
                continue

            result = pinching(first, second, kappa_low, kappa_high, spread.n)
            if not result.passed:
                raise CertificationError("pinching", f"violated for {result.where}")

            min_margin = min(min_margin, result.margin)
            pointwise = pointwise and result.pointwise

    scope = "pointwise" if pointwise else "critical values only"
    audit.append(f"pinching ({scope}): minimum relative margin {min_margin}")

    energy_bound = ratio * ladder.max_upper
    audit.append(f"energy bound L = {energy_bound}")

    exempt_class: typing.Optional[int] = None
    if solvable is not None:
        sigma_index = sigma(class_partition, solvable, energy_bound)
        exempt_class = sigma_index if sigma_index > 0 else None
        unsolved_classes = [
            c.strip
            for c in class_partition.classes
            if not all(solvable.get(label, False) for label in c.members)
        ]
        audit.append(f"sigma = {sigma_index}")
        if exempt_class is not None:
            audit.append(
                f"class bound (kappa_high/kappa_low) k_high[{exempt_class}] = "
                f"{ratio * ladder.bounds(exempt_class)[1]}"
            )

        if len(unsolved_classes) > 1:
            audit.append(
                f"flags mark {len(unsolved_classes)} classes without a known solution "
                f"(strips {unsolved_classes}); all but strip {sigma_index} must be solvable"
            )

    _LOGGER.debug("Class certificate issued (L=%s)", energy_bound)

    return Certificate(
        kind=CertificateKind.THEOREM1,
        energy_bound=energy_bound,
        exempt_class=exempt_class,
        audit=audit,
        conditional_on="C-(K) determines all critical points at infinity",
    )


def comparison_certify(
    upper: SpreadMember,
    lower: SpreadMember,
    kappa_prev: float,
    kappa_sigma: float,
    spread: Spread,
    class_partition: ClassPartition,
    kappa_low: float,
    kappa_high: float,
    energy_cap: typing.Optional[float] = None,
) -> Certificate:
    """Existence window for the lower member when the upper one has no solution.

    upper is K_sigma, lower is K_sigma_low with strips sigma_low < sigma.
    kappa_low and kappa_high are the constants of the class certificate.
    energy_cap defaults to its level L = (kappa_high / kappa_low) * max upper
    strip bound.
    """
    _check_kappas(kappa_prev, kappa_sigma)
    _check_kappas(kappa_low, kappa_high)
    ladder = spread.ladder
    audit: typing.List[str] = []

    sigma_strip = class_partition.class_of(upper.label).strip
    lower_strip = class_partition.class_of(lower.label).strip
    if not lower_strip < sigma_strip:
        raise CertificationError(
            "order",
            f"strip of {lower.label} ({lower_strip}) is not below "
            f"strip of {upper.label} ({sigma_strip})",
        )

    audit.append(f"order: {lower_strip} < {sigma_strip}")

    low_sigma, high_sigma = ladder.bounds(sigma_strip)
    _, high_prev = ladder.bounds(sigma_strip - 1)

    # (ii) gap
    if not kappa_sigma * high_prev < kappa_prev * low_sigma:
        raise CertificationError(
            "gap",
            f"kappa_sigma * k_high[{sigma_strip - 1}] = {kappa_sigma * high_prev} "
            f"is not below kappa_prev * k_low[{sigma_strip}] = {kappa_prev * low_sigma}",
        )

    audit.append(f"gap: {kappa_sigma * high_prev} < {kappa_prev * low_sigma}")

    # (i) pinching
    result = pinching(upper, lower, kappa_prev, kappa_sigma, spread.n)
    if not result.passed:
        raise CertificationError("pinching", f"violated for {result.where}")

    audit.append(f"pinching ({result.scope}): minimum relative margin {result.margin}")

    # (iii) bound
    if energy_cap is None:
        energy_cap = (kappa_high / kappa_low) * ladder.max_upper

    # Kappas inside [kappa_low, kappa_high] imply the bound for the default cap
    contained = kappa_low <= kappa_prev and kappa_sigma <= kappa_high
    audit.append(
        f"kappas {'inside' if contained else 'outside'} "
        f"[{kappa_low}, {kappa_high}]"
    )

    needed = (kappa_sigma / kappa_prev) * high_sigma
    if not needed <= energy_cap:
        raise CertificationError(
            "bound",
            f"(kappa_sigma/kappa_prev) * k_high[{sigma_strip}] = {needed} "
            f"exceeds L = {energy_cap}",
        )

    audit.append(f"bound: {needed} <= {energy_cap}")

    window = (kappa_prev * low_sigma, kappa_sigma * high_sigma)
    return Certificate(
        kind=CertificateKind.COMPARISON,
        energy_bound=float(energy_cap),
        window=window,
        audit=audit,
        conditional_on=f"{upper.label} has no solution with J <= {needed}",
    )


def subcritical_slack_check(
    upper: SpreadMember,
    lower: SpreadMember,
    kappa_prev: float,
    kappa_sigma: float,
    spread: Spread,
    class_partition: ClassPartition,
    kappa_low: float,
    kappa_high: float,
    margin: float = DEFAULT_SLACK_MARGIN,
) -> typing.Optional[Certificate]:
    """Re-run the comparison with all kappas widened by margin; None if it fails"""
    try:
        return comparison_certify(
            upper,
            lower,
            kappa_prev * (1.0 - margin),
            kappa_sigma * (1.0 + margin),
            spread,
            class_partition,
            kappa_low * (1.0 - margin),
            kappa_high * (1.0 + margin),
        )
    except CertificationError as err:
        _LOGGER.debug("Subcritical slack check failed: %s", err)
        return None
