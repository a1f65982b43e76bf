"""Shadow flow: integrator, concentration and the invariant monitor."""
import numpy as np
import pytest

from bubbletower.flow import (
    FlowConstants,
    IntegratorSettings,
    ShadowState,
    ShadowStateError,
    StopReason,
    ensemble,
    integrate,
    monitor_invariants,
    perturbed_start,
    shadow_rhs,
    trajectory_header,
    trajectory_rows,
)
from bubbletower.flow.rkf45 import next_step, rkf45_step
from bubbletower.func_core.sphere import geodesic_distance

from .conftest import SOUTH

HORIZON = 50.0
MINIMUM = np.array([np.sqrt(0.96), 0.0, 0.0, -0.2])


@pytest.fixture(scope="module")
def south_trajectory(heart):
    start = perturbed_start(SOUTH, 1e-4, 3.0)
    return integrate(start, heart, FlowConstants(), HORIZON)


def test_rkf45_polynomial():
    # Fourth order is exact for a cubic solution
    def rhs(t, y):
        return 3.0 * t**2 * np.ones_like(y)

    y_new, error = rkf45_step(rhs, 0.0, np.zeros(1), 1.0)
    assert y_new[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(error[0]) < 1e-12


def test_next_step():
    assert next_step(0.1, 0.0) == pytest.approx(0.5)
    assert next_step(0.1, 1e12) == pytest.approx(0.02)
    assert next_step(0.1, 1.0) == pytest.approx(0.09)


def test_state_validation(heart):
    with pytest.raises(ShadowStateError):
        ShadowState(alpha=1.0, a=[0.0, 0.0, 0.0, 2.0], lam=3.0, v_norm_sq=0.0)

    with pytest.raises(ShadowStateError):
        ShadowState(alpha=0.0, a=SOUTH, lam=3.0, v_norm_sq=0.0)

    with pytest.raises(ShadowStateError):
        ShadowState(alpha=1.0, a=SOUTH, lam=1.0, v_norm_sq=0.0)

    with pytest.raises(ShadowStateError):
        ShadowState(alpha=1.0, a=SOUTH, lam=3.0, v_norm_sq=-1.0)

    with pytest.raises(ShadowStateError):
        FlowConstants(c1=0.0)

    with pytest.raises(ShadowStateError):
        FlowConstants(coupling=True, coupling_coefficient=2.0)

    high = ShadowState(alpha=1.0, a=np.eye(6)[5], lam=3.0, v_norm_sq=0.0)
    with pytest.raises(ShadowStateError):
        shadow_rhs(high, heart, FlowConstants())

    with pytest.raises(ShadowStateError):
        integrate(ShadowState(1.0, SOUTH, 3.0, 0.0), heart, FlowConstants(), 0.0)


def test_pack_unpack():
    state = ShadowState(alpha=1.5, a=SOUTH, lam=4.0, v_norm_sq=0.25, t=2.0)
    other = ShadowState.unpack(state.pack(), t=state.t)
    assert other.alpha == state.alpha
    assert np.array_equal(other.a, state.a)
    assert other.lam == state.lam
    assert other.v_norm_sq == state.v_norm_sq


def test_rhs_at_critical_point(heart):
    lam = 3.0
    state = ShadowState(alpha=1.0, a=SOUTH, lam=lam, v_norm_sq=0.5)
    derivative = shadow_rhs(state, heart, FlowConstants())

    assert derivative[0] == 0.0
    assert np.allclose(derivative[1:-2], 0.0, atol=1e-14)

    # Laplacian of K at the south pole is -4
    assert derivative[-2] == pytest.approx(4.0 / (3.0**1.25 * lam))
    assert derivative[-1] == pytest.approx(-0.5 + 1.0 / lam**4)


def test_perturbed_start():
    start = perturbed_start(SOUTH, 1e-4, 3.0)
    assert float(geodesic_distance(start.a, SOUTH)) == pytest.approx(1e-4, rel=1e-6)
    assert start.lam == 3.0
    assert start.v_norm_sq == 0.0


def test_concentration_at_south(heart, south_trajectory):
    trajectory = south_trajectory
    assert trajectory.stop_reason == StopReason.HORIZON
    assert trajectory.times[-1] == pytest.approx(HORIZON)
    assert trajectory.num_samples == 201

    # lambda^2 grows linearly with slope 8 / 3^(5/4) near the critical point
    expected = np.sqrt(9.0 + 2.0 * 4.0 / 3.0**1.25 * HORIZON)
    assert trajectory.lam[-1] == pytest.approx(expected, rel=1e-2)
    assert trajectory.lam[-1] > 6.0
    assert float(geodesic_distance(trajectory.final.a, SOUTH)) < 1e-3

    report = monitor_invariants(trajectory, heart)
    assert report.monotone_applicable
    assert report.monotone_ok
    assert report.v_bound_ok
    assert report.v_bound_constant < 10.0
    assert report.concentration_ok
    assert report.passed


def test_deconcentration_at_minimum(heart):
    # Positive Laplacian at the minimum drives lambda down to the floor
    start = ShadowState(alpha=1.0, a=MINIMUM, lam=3.0, v_norm_sq=0.0)
    trajectory = integrate(start, heart, FlowConstants(), 5.0)
    assert trajectory.stop_reason == StopReason.DECONCENTRATED

    # lambda^2 = 9 - 2 (12.8 / 1.4^(5/4)) t reaches 1 near t = 0.476
    assert 0.3 < trajectory.times[-1] <= 0.48

    report = monitor_invariants(trajectory, heart)
    assert not report.monotone_applicable
    assert report.monotone_ok is None
    assert not report.concentration_ok
    assert not report.passed


def test_lambda_cap(heart):
    start = perturbed_start(SOUTH, 1e-4, 3.0)
    trajectory = integrate(
        start, heart, FlowConstants(), HORIZON, IntegratorSettings(lambda_cap=5.0)
    )
    assert trajectory.stop_reason == StopReason.CONCENTRATED
    assert trajectory.lam[-1] >= 5.0
    assert trajectory.times[-1] < HORIZON


def test_coupling_raises_lambda(heart):
    start = perturbed_start(SOUTH, 1e-4, 3.0, v_norm_sq=0.1)
    # A zero coefficient leaves the flow unchanged
    plain, zero = ensemble([start, start], heart, FlowConstants(coupling=True), 10.0)
    assert np.array_equal(plain.lam, zero.lam)

    coupled = integrate(
        start, heart, FlowConstants(coupling=True, coupling_coefficient=0.5), 10.0
    )
    assert coupled.lam[-1] > plain.lam[-1]


def test_output_times(heart):
    start = perturbed_start(SOUTH, 1e-4, 3.0)
    trajectory = integrate(
        start, heart, FlowConstants(), 3.0, output_times=[1.0, 2.0, 3.0]
    )
    assert trajectory.times.tolist() == [0.0, 1.0, 2.0, 3.0]


def test_trajectory_rows(heart, south_trajectory):
    header = trajectory_header(3)
    assert header[:5] == ["t", "a0", "a1", "a2", "a3"]
    assert header[-1] == "monotone_step"

    rows = trajectory_rows(south_trajectory, heart)
    assert len(rows) == south_trajectory.num_samples
    assert all(len(row) == len(header) for row in rows)
    assert all(row[-2] == 1 for row in rows)
    assert all(row[-1] == 1 for row in rows)
    assert float(rows[0][5]) == pytest.approx(3.0)
