import math

import numpy as np
import pytest
from scipy.integrate import simpson

from src.common.errors import ConfigError, UndefinedParameterError
from src.common.field_model import (
    FieldConfig,
    electric_field,
    handedness_label,
    keldysh_gamma,
    pulse_centers,
    reference_lower_limit,
    vector_potential_reference,
)


def lrcp(T=0.0, phi2=0.0, **kwargs) -> FieldConfig:
    return FieldConfig.from_amplitudes(
        0.1, 0.1, delta1=1, delta2=-1, T_delay=T, phi2=phi2, **kwargs
    )


def test_default_field_at_pulse_center():
    assert electric_field(FieldConfig(), 0.0) == pytest.approx([0.1, 0.0, 0.0], abs=1e-15)


def test_derived_amplitudes():
    cfg = FieldConfig(E0=0.1 * math.sqrt(2), delta1=1, delta2=-1, amp2_scale=0.5)
    assert cfg.E1 == pytest.approx(0.1)
    assert cfg.E2 == pytest.approx(0.05)
    assert FieldConfig(E0=0.2, delta1=0).E1 == pytest.approx(0.2)


def test_from_amplitudes_recovers_amplitudes():
    cfg = FieldConfig.from_amplitudes(0.1, 0.07, delta1=-1, delta2=1, T_delay=50.0)
    assert cfg.E1 == pytest.approx(0.1)
    assert cfg.E2 == pytest.approx(0.07)
    assert cfg.T_delay == 50.0
    assert cfg.has_second_pulse


def test_from_amplitudes_rejects_second_pulse_without_first():
    with pytest.raises(ConfigError):
        FieldConfig.from_amplitudes(0.0, 0.1)


@pytest.mark.parametrize("delta", [2, -2, 0.5])
def test_handedness_validated(delta):
    with pytest.raises(ValueError):
        FieldConfig(delta1=delta)


def test_z_component_is_zero():
    cfg = FieldConfig(E0=0.3, delta1=-1, delta2=1, amp2_scale=1.0, T_delay=20.0, phi2=1.0)
    times = np.linspace(-60.0, 80.0, 501)
    assert np.all(electric_field(cfg, times)[2] == 0.0)


def test_array_times_match_scalar_times():
    cfg = lrcp(T=30.0, phi2=0.4)
    times = np.array([-5.0, 0.0, 12.5, 30.0])
    block = electric_field(cfg, times)
    for i, t in enumerate(times):
        assert np.array_equal(block[:, i], electric_field(cfg, t))


def test_lrcp_without_delay_is_linear():
    cfg = lrcp()
    times = np.linspace(-40.0, 40.0, 801)
    field = electric_field(cfg, times)
    assert np.all(field[1] == 0.0)
    linear = electric_field(FieldConfig(E0=0.2, delta1=0), times)
    assert field[0] == pytest.approx(linear[0], rel=1e-14, abs=1e-300)


def test_envelope_bound_far_from_pulses():
    cfg = lrcp(T=100.0)
    for t in (-10 * cfg.tau, 100.0 + 10 * cfg.tau):
        assert np.linalg.norm(electric_field(cfg, t)) <= cfg.E0 * math.exp(-50) * 1.0001


def test_time_shift_covariance():
    cfg = lrcp(T=40.0, phi2=0.7)
    shifted = cfg.shifted(13.0)
    for t in np.linspace(-30.0, 70.0, 41):
        assert electric_field(shifted, t + 13.0) == pytest.approx(
            electric_field(cfg, t), abs=1e-14
        )


@pytest.mark.parametrize("delta1, delta2", [(1, -1), (-1, 1), (1, 1)])
def test_rotation_by_cep_shift(delta1, delta2):
    cfg = FieldConfig.from_amplitudes(0.1, 0.1, delta1, delta2, T_delay=25.0, phi2=0.3)
    alpha = 0.9
    rotation = np.array([[math.cos(alpha), -math.sin(alpha), 0.0],
                         [math.sin(alpha), math.cos(alpha), 0.0],
                         [0.0, 0.0, 1.0]])
    rotated = cfg.rotated(alpha)
    for t in np.linspace(-20.0, 45.0, 27):
        assert electric_field(rotated, t) == pytest.approx(
            rotation @ electric_field(cfg, t), abs=1e-14
        )


def test_rotating_linear_pulse_is_rejected():
    with pytest.raises(ConfigError):
        FieldConfig(E0=0.2, delta1=0).rotated(0.5)


def test_pulse_centers_and_labels():
    assert pulse_centers(FieldConfig()) == (0.0,)
    assert pulse_centers(lrcp(T=100.0)) == (0.0, 100.0)
    assert handedness_label(lrcp(T=100.0)) == "LRCP"
    assert handedness_label(FieldConfig.from_amplitudes(0.1, 0.1, -1, -1)) == "RRCP"
    assert handedness_label(FieldConfig()) == "LCP"
    assert handedness_label(FieldConfig(delta1=0)) == "linear"


def test_vector_potential_trivial_cases():
    assert np.array_equal(vector_potential_reference(FieldConfig(E0=0.0), 12.0), np.zeros(3))
    cfg = lrcp(T=20.0)
    assert np.array_equal(vector_potential_reference(cfg, reference_lower_limit(cfg)), np.zeros(3))
    assert reference_lower_limit(cfg) == pytest.approx(-100.0)


@pytest.mark.parametrize("t", [5.0, 100.0])
def test_vector_potential_matches_simpson(t):
    cfg = FieldConfig()
    t_lo = reference_lower_limit(cfg)
    times = np.linspace(t_lo, t, 40001)
    field = electric_field(cfg, times)
    expected = -simpson(field, x=times, axis=1)
    assert vector_potential_reference(cfg, t) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize(
    "E0, omega, expected",
    [(0.1 * math.sqrt(2), 0.6, 4.2426), (0.6, 0.6, 1.0), (0.06, 0.6, 10.0)],
)
def test_keldysh_gamma(E0, omega, expected):
    assert keldysh_gamma(FieldConfig(E0=E0, omega=omega)) == pytest.approx(expected, abs=1e-4)


def test_keldysh_gamma_undefined_without_field():
    with pytest.raises(UndefinedParameterError):
        keldysh_gamma(FieldConfig(E0=0.0))
