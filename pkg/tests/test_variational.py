"""Quadrature, bubbles, the energy functional and its expansion."""
import math

import numpy as np
import pytest

from bubbletower.func_core import classify_point
from bubbletower.func_core.sphere import sphere_volume
from bubbletower.variational import (
    DiscreteFunction,
    EnergyError,
    ExpansionFitError,
    QuadratureError,
    bubble,
    bubble_energy,
    bubble_quadrature,
    bubble_residual,
    build_quadrature,
    conformal_constant,
    cpi_energy_constant,
    critical_exponent,
    energy_JK,
    energy_JK_subcritical,
    expansion_sign_check,
    fit_expansion,
    gradient_JK,
    limit_energy,
    subcritical_approach,
    yamabe_sphere,
)

from .conftest import random_sphere_points


def pole(n: int, sign: float = 1.0) -> np.ndarray:
    point = np.zeros(n + 1)
    point[-1] = sign
    return point


def test_constants():
    assert conformal_constant(3) == 8.0
    assert critical_exponent(3) == 6.0
    assert critical_exponent(5) == pytest.approx(10.0 / 3.0)
    assert yamabe_sphere(3) == pytest.approx(6.0 * (2.0 * math.pi**2) ** (2.0 / 3.0))

    with pytest.raises(EnergyError):
        conformal_constant(2)


def test_product_rule():
    rule = build_quadrature(3, 4)
    assert rule.integrate(np.ones(rule.num_points)) == pytest.approx(2.0 * math.pi**2)

    # Mean of x_i^2 over S^n is 1 / (n + 1)
    assert rule.integrate(rule.points[:, -1] ** 2) == pytest.approx(
        sphere_volume(3) / 4.0
    )
    assert rule.integrate(rule.points[:, 0] ** 3) == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(QuadratureError):
        build_quadrature(8, 2)


def test_quadrature_cache(tmp_path):
    first = build_quadrature(3, 2, cache_dir=tmp_path)
    assert (tmp_path / "quadrature" / "n3_level2.npz").is_file()

    second = build_quadrature(3, 2, cache_dir=tmp_path)
    assert np.array_equal(first.points, second.points)
    assert np.array_equal(first.weights, second.weights)


def test_bubble_rule_limits():
    with pytest.raises(QuadratureError):
        bubble_quadrature(pole(3), 5000.0, level=4)

    with pytest.raises(QuadratureError):
        bubble_quadrature(pole(3), 0.5, level=4)


@pytest.mark.parametrize("n", [3, 5])
def test_bubble_solves_yamabe(n, rng):
    points = random_sphere_points(rng, n, 200)
    for concentration in (1.0, 5.0, 40.0):
        b = bubble(random_sphere_points(rng, n, 1)[0], concentration, n)
        assert bubble_residual(b, points) < 1e-10


def test_bubble_parameters():
    with pytest.raises(EnergyError):
        bubble(pole(3), 0.5, 3)

    with pytest.raises(EnergyError):
        bubble(pole(2), 2.0, 2)

    with pytest.raises(EnergyError):
        bubble(pole(3), 2.0, 4)


@pytest.mark.parametrize("concentration", [1.0, 8.0, 64.0])
def test_constant_curvature_energy(concentration):
    # Conformal invariance: every bubble has the energy of the round sphere
    energy, error_estimate = bubble_energy(1.0, pole(3), concentration, level=4)
    assert energy == pytest.approx(yamabe_sphere(3), rel=1e-6)
    assert error_estimate < 1e-4 * energy


def test_bubble_energy_s5_asymptote(s5_height):
    north = pole(5)
    energy, _ = bubble_energy(1.0, north, 64.0, level=6)
    assert abs(energy - yamabe_sphere(5)) / yamabe_sphere(5) < 0.02

    limit = limit_energy(s5_height, north)
    assert limit == pytest.approx(yamabe_sphere(5) / 3.0 ** 0.6)

    errors = [
        abs(bubble_energy(s5_height, north, concentration, level=6)[0] - limit)
        for concentration in (16.0, 64.0)
    ]
    assert errors[1] < errors[0]


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_expansion_sign(s5_height, sign):
    point = classify_point(s5_height, pole(5, sign))
    fit = expansion_sign_check(s5_height, point, [4.0, 8.0, 16.0, 32.0], level=4)

    # Positive coefficient at the maximum, negative at the minimum
    assert fit.expected_sign == int(sign)
    assert fit.sign == int(sign)
    assert fit.consistent
    assert abs(fit.t_statistic) > 5
    assert len(fit.rows) == 4


def test_expansion_needs_high_dimension(s3_height, s5_height):
    with pytest.raises(ExpansionFitError):
        fit_expansion(s3_height, pole(3), [4.0, 8.0, 16.0], level=2)

    with pytest.raises(ExpansionFitError):
        fit_expansion(s5_height, pole(5), [4.0, 8.0], level=2)


def test_gradient_consistency(s5_height, rng):
    rule = build_quadrature(5, 2)
    size = (rule.num_points, 6)
    step = 1e-6

    for _ in range(50):
        u = DiscreteFunction(
            values=1.0 + rng.random(rule.num_points), gradients=rng.normal(size=size)
        )
        v = DiscreteFunction(
            values=rng.normal(size=rule.num_points), gradients=rng.normal(size=size)
        )

        exact = gradient_JK(s5_height, u, v, rule)
        forward = energy_JK(s5_height, u + v * step, rule)
        backward = energy_JK(s5_height, u - v * step, rule)
        estimate = (forward - backward) / (2 * step)

        scale = energy_JK(s5_height, u, rule)
        assert estimate == pytest.approx(exact, rel=1e-5, abs=1e-9 * scale)


def test_energy_domain(s3_height):
    rule = build_quadrature(3, 2)
    zero = DiscreteFunction(
        values=np.zeros(rule.num_points), gradients=np.zeros((rule.num_points, 4))
    )
    with pytest.raises(EnergyError):
        energy_JK(s3_height, zero, rule)

    one = DiscreteFunction(
        values=np.ones(rule.num_points), gradients=np.zeros((rule.num_points, 4))
    )
    assert one.is_admissible
    with pytest.raises(EnergyError):
        energy_JK_subcritical(s3_height, one, 4.0, rule)

    # Constant u on the round sphere with K = 1 is a minimizer
    assert energy_JK(1.0, one, rule) == pytest.approx(yamabe_sphere(3), rel=1e-10)


def test_subcritical_approach(s3_height):
    rows = subcritical_approach(s3_height, pole(3), [0.04, 0.01], level=2)
    assert [tau for tau, _, _ in rows] == [0.04, 0.01]
    assert [concentration for _, concentration, _ in rows] == pytest.approx([5.0, 10.0])
    assert all(np.isfinite(energy) for _, _, energy in rows)


def test_cpi_energy_constant(tmp_path):
    assert cpi_energy_constant(2) == pytest.approx(8.0 * math.pi)

    value = cpi_energy_constant(3, level=3, cache_dir=tmp_path)
    assert value == pytest.approx(yamabe_sphere(3), rel=1e-6)
    assert (tmp_path / "cpi_constants.json").is_file()
    assert cpi_energy_constant(3, level=3, cache_dir=tmp_path) == value
