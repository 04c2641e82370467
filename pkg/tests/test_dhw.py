import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from src.common.errors import StepBudgetExceeded
from src.common.field_model import FieldConfig, field_components, vector_potential_reference
from src.common.pair_production.dhw import (
    STATE_SIZE,
    integrate_fixed_rk4,
    integrate_single,
    integration_window,
    rhs,
    solve_single,
)
from src.common.pair_production.states import Momentum, SliceSpec, SolverSettings, WignerState
from src.common.pair_production.sweep import compute_slice_1d


def vlasov_occupation(cfg: FieldConfig, q: Momentum, settings: SolverSettings) -> float:
    """Per-spin quantum Vlasov occupation for a field polarized along x."""
    eps_perp2 = 1.0 + q.qy**2 + q.qz**2
    eps_perp = math.sqrt(eps_perp2)

    def vlasov(t, y):
        f, u, w, A = y
        ex, _ = field_components(cfg, t)
        omega2 = eps_perp2 + (q.qx - A) ** 2
        omega = math.sqrt(omega2)
        W = ex * eps_perp / omega2
        return [0.5 * W * u, W * (1.0 - 2.0 * f) - 2.0 * omega * w, 2.0 * omega * u, -ex]

    sol = solve_ivp(
        vlasov, integration_window(cfg, settings), [0.0, 0.0, 0.0, 0.0],
        method="DOP853", rtol=1e-12, atol=1e-15, max_step=0.25,
    )
    return float(sol.y[0, -1])


def test_vacuum_state_round_trips_through_array():
    assert np.array_equal(WignerState.vacuum().to_array(), np.zeros(STATE_SIZE))
    y = np.arange(STATE_SIZE, dtype=float)
    assert np.array_equal(WignerState.from_array(y).to_array(), y)


def test_rhs_vacuum_at_rest():
    # Default single pulse at its center: E = (0.1, 0, 0)
    d = rhs(FieldConfig(), Momentum(), 0.0, WignerState.vacuum())
    assert d.f == 0.0
    assert d.v == pytest.approx((0.2, 0.0, 0.0), abs=1e-15)
    assert d.a_vec == (0.0, 0.0, 0.0)
    assert d.t_vec == (0.0, 0.0, 0.0)
    assert d.A == pytest.approx((-0.1, 0.0, 0.0), abs=1e-15)


def test_rhs_vacuum_with_momentum_along_field():
    d = rhs(FieldConfig(), Momentum(qx=0.5), 0.0, WignerState.vacuum())
    assert d.f == 0.0
    assert d.v[0] == pytest.approx(1.4311 * 0.1, rel=1e-4)
    assert d.v[0] == pytest.approx(2 * 0.1 / 1.25**1.5, rel=1e-12)
    assert d.v[1] == 0.0 and d.v[2] == 0.0


def test_rhs_free_precession_along_momentum():
    # No field, v and t parallel to p: v' = -2 t and t' = 2 Omega^2 v, so (v, t) turn at 2 Omega
    state = WignerState(v=(0.1, 0.0, 0.0), t_vec=(0.05, 0.0, 0.0))
    d = rhs(FieldConfig(E0=0.0), Momentum(qx=0.6), 0.0, state)
    omega2 = 1.0 + 0.6**2
    assert d.f == 0.0
    assert d.v == pytest.approx((-0.1, 0.0, 0.0), abs=1e-15)
    assert d.a_vec == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
    assert d.t_vec == pytest.approx((2.0 * omega2 * 0.1, 0.0, 0.0), rel=1e-13, abs=1e-15)


def test_rhs_without_field_freezes_occupation():
    state = WignerState(f=0.3, A=(0.2, -0.1, 0.0))
    d = rhs(FieldConfig(E0=0.0), Momentum(qx=0.4, qy=-0.2, qz=0.1), 3.0, state)
    assert d.to_array() == pytest.approx(np.zeros(STATE_SIZE), abs=0.0)


def test_zero_field_gives_exact_zero():
    result = integrate_single(FieldConfig(E0=0.0), Momentum(qx=0.3, qy=0.5))
    assert result.f == 0.0
    assert np.all(result.final_state.to_array() == 0.0)


def test_integration_window_covers_both_pulses():
    cfg = FieldConfig.from_amplitudes(0.1, 0.1, 1, -1, T_delay=100.0)
    assert integration_window(cfg, SolverSettings()) == (-80.0, 180.0)
    assert integration_window(FieldConfig(), SolverSettings(pad=5.0)) == (-50.0, 50.0)
    # A vanished second pulse does not stretch the window
    single = FieldConfig(T_delay=100.0, amp2_scale=0.0)
    assert integration_window(single, SolverSettings()) == (-80.0, 80.0)


def test_trajectory_is_returned_on_request(strong_pulse):
    result = integrate_single(strong_pulse, Momentum(), trajectory=True)
    assert result.times[0] == result.t_initial
    assert result.times[-1] == pytest.approx(result.t_final)
    assert result.states.shape == (result.n_steps + 1, STATE_SIZE)
    assert np.all(np.diff(result.times) > 0)
    assert integrate_single(strong_pulse, Momentum()).times is None


def test_final_vector_potential_matches_quadrature(strong_pulse, tight):
    result = integrate_single(strong_pulse, Momentum(qx=0.2), tight)
    reference = vector_potential_reference(strong_pulse, result.t_final)
    assert np.array(result.final_state.A) == pytest.approx(reference, abs=1e-8)


def test_strong_pulse_creates_pairs(strong_pulse, tight):
    f = solve_single(strong_pulse, Momentum(), tight)
    assert 1e-6 < f <= 2.0 + 1e-8


def test_fixed_step_rk4_agrees(strong_pulse, tight):
    q = Momentum(qx=0.1, qy=-0.2)
    adaptive = solve_single(strong_pulse, q, tight)
    fixed = integrate_fixed_rk4(strong_pulse, q, n_steps=40000, settings=tight).f
    assert fixed == pytest.approx(adaptive, rel=1e-6)


def test_tolerance_halving_converges(strong_pulse, tight):
    q = Momentum(qx=0.3)
    f = solve_single(strong_pulse, q, tight)
    halved = SolverSettings(rel_tol=tight.rel_tol / 2, abs_tol=tight.abs_tol / 2)
    assert solve_single(strong_pulse, q, halved) == pytest.approx(f, rel=1e-6)


def test_window_padding_converges(strong_pulse):
    q = Momentum(qy=0.25)
    base = SolverSettings(rel_tol=1e-13, abs_tol=1e-15, pad=8.0)
    wider = SolverSettings(rel_tol=1e-13, abs_tol=1e-15, pad=10.0)
    assert solve_single(strong_pulse, q, wider) == pytest.approx(
        solve_single(strong_pulse, q, base), rel=1e-8
    )


def test_time_translation_invariance(strong_pulse, tight):
    q = Momentum(qx=-0.2, qy=0.1)
    f = solve_single(strong_pulse, q, tight)
    assert solve_single(strong_pulse.shifted(7.5), q, tight) == pytest.approx(f, rel=1e-7)


@pytest.mark.parametrize("alpha", [0.4, math.pi / 3])
def test_rotational_covariance(alpha, tight):
    cfg = FieldConfig.from_amplitudes(0.5, 0.5, 1, -1, tau=3.0, T_delay=6.0, phi2=0.5)
    q = Momentum(qx=0.3, qy=0.1)
    f = solve_single(cfg, q, tight)
    assert solve_single(cfg.rotated(alpha), q.rotated(alpha), tight) == pytest.approx(f, rel=1e-6)


def test_lrcp_without_delay_equals_linear_pulse(tight):
    lrcp = FieldConfig.from_amplitudes(0.5, 0.5, 1, -1, tau=3.0)
    linear = FieldConfig(E0=1.0, delta1=0, tau=3.0)
    for q in (Momentum(), Momentum(qx=0.3, qy=0.2)):
        assert solve_single(lrcp, q, tight) == pytest.approx(
            solve_single(linear, q, tight), rel=1e-6
        )


@pytest.mark.parametrize("q", [Momentum(), Momentum(qx=0.5), Momentum(qx=-0.3, qy=0.6, qz=0.2)])
def test_occupation_bound(strong_pulse, q):
    f = solve_single(strong_pulse, q)
    assert -1e-8 <= f <= 2.0 + 1e-8


@pytest.mark.parametrize(
    "q",
    [
        Momentum(),
        Momentum(qx=0.4),
        Momentum(qx=-0.3, qy=0.5),
        Momentum(qx=1.2, qy=0.4, qz=0.3),
    ],
)
def test_linear_pulse_matches_vlasov_equation(q, tight):
    # For a linearly polarized field the spin-summed occupation is twice the Vlasov one
    cfg = FieldConfig(E0=0.5, delta1=0, omega=0.6, tau=3.0)
    expected = 2.0 * vlasov_occupation(cfg, q, tight)
    assert solve_single(cfg, q, tight) == pytest.approx(expected, rel=1e-6, abs=1e-12)


def test_default_pulse_slice_stays_bounded():
    slice_ = compute_slice_1d(FieldConfig(), SliceSpec(axis="x", q_min=0.0, q_max=1.4, n=15))
    assert np.all(slice_.f >= -1e-8)
    assert np.all(slice_.f <= 2.0 + 1e-8)


def test_step_budget_exhaustion(strong_pulse):
    with pytest.raises(StepBudgetExceeded) as info:
        solve_single(strong_pulse, Momentum(), SolverSettings(max_steps=5))
    assert info.value.max_steps == 5
    assert info.value.t_reached < 24.0


def test_settings_reject_short_window():
    with pytest.raises(ValueError):
        SolverSettings(pad=4.0)


@pytest.mark.slow
def test_default_ring_point_against_rk4():
    cfg = FieldConfig()
    settings = SolverSettings(rel_tol=1e-12, abs_tol=1e-15)
    q = Momentum(qy=-0.64)
    f = solve_single(cfg, q, settings)
    assert f > 0.0
    fixed = integrate_fixed_rk4(cfg, q, n_steps=250000, settings=settings).f
    assert fixed == pytest.approx(f, rel=1e-6)


@pytest.mark.slow
def test_first_fringe_is_local_maximum():
    cfg = FieldConfig.from_amplitudes(0.1, 0.1, 1, 1, T_delay=100.0)
    values = [solve_single(cfg, Momentum(qx=qx)) for qx in (0.25557, 0.26157, 0.26757)]
    assert values[1] > values[0] and values[1] > values[2]
