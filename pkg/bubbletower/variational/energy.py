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

import json
import logging
import typing
from pathlib import Path

import numpy as np
from scipy.stats import linregress

from bubbletower.func_core import CandidateFunction, CriticalPoint, SphereSpec
from bubbletower.func_core.candidate import parse_candidate
from bubbletower.func_core.sphere import normalize

from .bubble import bubble, bubble_gradient, bubble_values
from .const import (
    Bubble,
    DiscreteFunction,
    EnergyError,
    ExpansionFit,
    ExpansionFitError,
    ExpansionRow,
    QuadratureRule,
    conformal_constant,
    critical_exponent,
    scalar_curvature,
    yamabe_sphere,
)
from .quadrature import bubble_quadrature

_LOGGER = logging.getLogger(__name__)

# Concentration used to evaluate the CPI energy constant
_CONSTANT_CONCENTRATION = 16.0


def discretize(
    source: typing.Union[CandidateFunction, Bubble], rule: QuadratureRule
) -> DiscreteFunction:
    """Values and tangent gradients of a closed-form function at rule points"""
    if isinstance(source, Bubble):
        return DiscreteFunction(
            values=bubble_values(source, rule.points),
            gradients=bubble_gradient(source, rule.points),
        )

    jet = source.jet(rule.points, order=1)
    assert jet.gradient is not None
    radial = np.einsum("ij,ij->i", jet.gradient, rule.points)
    gradients = jet.gradient - radial[:, None] * rule.points

    return DiscreteFunction(values=jet.value.copy(), gradients=gradients)


def _dirichlet(u: DiscreteFunction, v: DiscreteFunction, rule: QuadratureRule) -> float:
    """int c_n <grad u, grad v> + R u v"""
    n = rule.n
    integrand = conformal_constant(n) * np.einsum(
        "ij,ij->i", u.gradients, v.gradients
    ) + scalar_curvature(n) * (u.values * v.values)

    return rule.integrate(integrand)


def _curvature_values(
    candidate: typing.Union[CandidateFunction, np.ndarray, float], rule: QuadratureRule
) -> np.ndarray:
    if isinstance(candidate, CandidateFunction):
        if candidate.n != rule.n:
            raise EnergyError(
                f"Candidate lives on S^{candidate.n}, rule on S^{rule.n}"
            )

        return candidate.values(rule.points)

    return np.broadcast_to(np.asarray(candidate, dtype=float), rule.weights.shape)


def _check_admissible(u: DiscreteFunction):
    if not np.any(u.values != 0):
        raise EnergyError("Zero denominator: u vanishes identically")


def energy_JK(
    candidate: typing.Union[CandidateFunction, np.ndarray, float],
    u: DiscreteFunction,
    rule: QuadratureRule,
) -> float:
    """J_K(u) = int(L u u) / (int K u^(2n/(n-2)))^((n-2)/n)"""
    return energy_JK_subcritical(candidate, u, 0.0, rule)


def energy_JK_subcritical(
    candidate: typing.Union[CandidateFunction, np.ndarray, float],
    u: DiscreteFunction,
    tau: float,
    rule: QuadratureRule,
) -> float:
    """J_{K,tau}(u) = int(L u u) / (int K u^(p+1))^(2/(p+1)), p+1 = 2n/(n-2) - tau"""
    n = rule.n
    power = critical_exponent(n) - tau
    if not 0 <= tau < 4.0 / (n - 2):
        raise EnergyError(f"tau must be in [0, {4.0 / (n - 2)}) (got {tau})")

    _check_admissible(u)
    values = _curvature_values(candidate, rule)

    numerator = _dirichlet(u, u, rule)
    denominator = rule.integrate(values * np.abs(u.values) ** power)
    if denominator <= 0:
        raise EnergyError(f"Zero denominator ({denominator})")

    return numerator / denominator ** (2.0 / power)


def gradient_JK(
    candidate: typing.Union[CandidateFunction, np.ndarray, float],
    u: DiscreteFunction,
    v: DiscreteFunction,
    rule: QuadratureRule,
) -> float:
    """dJ_K(u)v = (2/k^((n-2)/n)) [int L u v - (r/k) int K u^((n+2)/(n-2)) v]"""
    n = rule.n
    _check_admissible(u)
    values = _curvature_values(candidate, rule)
    power = critical_exponent(n)

    r = _dirichlet(u, u, rule)
    k = rule.integrate(values * np.abs(u.values) ** power)
    if k <= 0:
        raise EnergyError(f"Zero denominator ({k})")

    mixed = _dirichlet(u, v, rule)
    nonlinear = rule.integrate(
        values * np.sign(u.values) * np.abs(u.values) ** (power - 1.0) * v.values
    )

    return (2.0 / k ** ((n - 2.0) / n)) * (mixed - (r / k) * nonlinear)


# -----------------------------------------------------------------------------


def bubble_energy(
    candidate: typing.Union[CandidateFunction, float],
    center: np.ndarray,
    concentration: float,
    level: int,
    tau: float = 0.0,
) -> typing.Tuple[float, float]:
    """J_{K,tau}(phi_{a,lam}) and the change when the radial step doubles"""
    n = candidate.n if isinstance(candidate, CandidateFunction) else len(center) - 1
    b = bubble(center, concentration, n)

    energies = []
    for step_scale in (1.0, 2.0):
        rule = bubble_quadrature(b.center, concentration, level, step_scale=step_scale)
        energies.append(
            energy_JK_subcritical(candidate, discretize(b, rule), tau, rule)
        )

    return energies[0], abs(energies[0] - energies[1])


def limit_energy(candidate: CandidateFunction, center: np.ndarray) -> float:
    """Y(S^n) / K(a)^((n-2)/n)"""
    n = candidate.n
    return yamabe_sphere(n) / candidate(normalize(center)) ** ((n - 2.0) / n)


def fit_expansion(
    candidate: CandidateFunction,
    center: np.ndarray,
    concentrations: typing.Sequence[float],
    level: int,
    laplacian: float = 0.0,
) -> ExpansionFit:
    """Fit J_K(phi_{a,lam}) - Y/K(a)^((n-2)/n) against lam^-2"""
    if not candidate.spec.is_high_dim:
        raise ExpansionFitError(
            f"Expansion fit needs n >= 5 for the lambda^-2 term to dominate (got {candidate.n})"
        )

    if len(concentrations) < 3:
        raise ExpansionFitError(
            f"Expansion fit needs at least 3 concentrations (got {len(concentrations)})"
        )

    center = normalize(np.asarray(center, dtype=float))
    limit = limit_energy(candidate, center)

    rows: typing.List[ExpansionRow] = []
    for concentration in concentrations:
        energy, error_estimate = bubble_energy(candidate, center, concentration, level)
        rows.append(
            ExpansionRow(
                concentration=float(concentration),
                energy=energy,
                excess=energy - limit,
                error_estimate=error_estimate,
            )
        )
        _LOGGER.debug("J(lambda=%s) = %s", concentration, energy)

    x = np.array([r.concentration ** -2.0 for r in rows])
    y = np.array([r.excess for r in rows])
    result = linregress(x, y)

    stderr = float(result.stderr)
    if stderr > 0:
        t_statistic = float(result.slope / stderr)
    else:
        t_statistic = 0.0 if result.slope == 0 else float(np.sign(result.slope) * np.inf)

    return ExpansionFit(
        center=center,
        laplacian=float(laplacian),
        coefficient=float(result.slope),
        intercept=float(result.intercept),
        stderr=stderr,
        t_statistic=t_statistic,
        rows=rows,
    )


def expansion_sign_check(
    candidate: CandidateFunction,
    point: CriticalPoint,
    concentrations: typing.Sequence[float],
    level: int,
) -> ExpansionFit:
    """Fitted lambda^-2 coefficient at a critical point, expected opposite to sign(Laplacian)"""
    return fit_expansion(
        candidate,
        point.location,
        concentrations,
        level,
        laplacian=point.laplacian,
    )


def subcritical_approach(
    candidate: CandidateFunction,
    center: np.ndarray,
    taus: typing.Sequence[float],
    level: int,
) -> typing.List[typing.Tuple[float, float, float]]:
    """(tau, lambda = tau^-1/2, J_{K,tau}(phi_{a,lambda})) along a sweep"""
    rows = []
    for tau in taus:
        concentration = float(tau) ** -0.5
        energy, _ = bubble_energy(candidate, center, concentration, level, tau=tau)
        rows.append((float(tau), concentration, energy))

    return rows


# -----------------------------------------------------------------------------


def cpi_energy_constant(
    n: int,
    level: int = 4,
    cache_dir: typing.Optional[typing.Union[str, Path]] = None,
) -> float:
    """Energy of a single concentrated bubble for K = 1.

    Equals Y(S^n). For n = 2 the closed form 8 pi is used.
    """
    if n == 2:
        return yamabe_sphere(2)

    cache_path: typing.Optional[Path] = None
    if cache_dir is not None:
        cache_path = Path(cache_dir) / "cpi_constants.json"
        if cache_path.is_file():
            with open(cache_path, "r", encoding="utf-8") as cache_file:
                cached = json.load(cache_file)

            key = f"{n}:{level}"
            if key in cached:
                _LOGGER.debug("CPI constant cache hit (n=%s, level=%s)", n, level)
                return float(cached[key])

        _LOGGER.debug("CPI constant cache miss (n=%s, level=%s)", n, level)

    unit = parse_candidate("1", SphereSpec(n), validate=False)
    center = np.zeros(n + 1)
    center[-1] = 1.0
    value, _ = bubble_energy(unit, center, _CONSTANT_CONCENTRATION, level)

    if cache_path is not None:
        cached = {}
        if cache_path.is_file():
            with open(cache_path, "r", encoding="utf-8") as cache_file:
                cached = json.load(cache_file)

        cached[f"{n}:{level}"] = value
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = cache_path.with_suffix(".tmp")
        with open(temp_path, "w", encoding="utf-8") as cache_file:
            json.dump(cached, cache_file, indent=4, sort_keys=True)

        temp_path.replace(cache_path)

    return value
