import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.common.errors import DegeneratePredictionError, PredictionError
from src.common.semiclassical import (
    SpiralPrediction,
    arm_count,
    effective_mass,
    envelope,
    estimate_delay,
    photon_number,
    photon_number_from_arms,
    ramsey_indices,
    ramsey_peaks,
    ring_radius,
    rotation_angle,
    spiral_curve,
    spiral_indices,
    spiral_pitch,
    spiral_radius,
    theta0,
)

LRCP = SpiralPrediction(T=100.0, ell=4, delta1=1, delta2=-1)
RLCP = SpiralPrediction(T=100.0, ell=4, delta1=-1, delta2=1)
LLCP = SpiralPrediction(T=100.0, ell=4, delta1=1, delta2=1)


def test_theta0():
    assert theta0(0.0, 100.0) == pytest.approx(200.0)
    assert theta0(0.6, 100.0) == pytest.approx(233.238, abs=1e-3)
    assert np.allclose(theta0(np.array([0.0, 0.6]), 100.0), [200.0, 233.238], atol=1e-3)


@pytest.mark.parametrize("k, expected", [(33, 0.27350), (38, 0.65205), (43, 0.90823)])
def test_ramsey_peaks(k, expected):
    assert ramsey_peaks(100.0, k) == pytest.approx(expected, abs=1e-4)


def test_ramsey_peak_below_threshold():
    assert ramsey_peaks(100.0, 31) is None


def test_ramsey_needs_positive_delay():
    with pytest.raises(PredictionError):
        ramsey_peaks(0.0, 33)


def test_ramsey_indices_cover_table_slice():
    assert ramsey_indices(100.0, 0.2, 0.95) == list(range(33, 44))


def test_spiral_radius_values():
    assert spiral_radius(0.0, 32, LRCP) == pytest.approx(0.1032, abs=1e-4)
    assert spiral_radius(math.pi / 8, 32, LRCP) == pytest.approx(0.2061, abs=1e-4)
    assert spiral_radius(0.0, 31, LRCP) is None


def test_equal_handedness_spirals_are_ramsey_rings():
    for phi in (0.0, 1.0, 4.0):
        assert spiral_radius(phi, 38, LLCP) == pytest.approx(ramsey_peaks(100.0, 38))


def test_spiral_curve_matches_pointwise_radius():
    phis = np.linspace(0.0, 2 * math.pi, 17)
    curve = spiral_curve(32, RLCP, phis)
    for phi, r in zip(phis, curve):
        expected = spiral_radius(float(phi), 32, RLCP)
        if expected is None:
            assert np.isnan(r)
        else:
            assert r == pytest.approx(expected)


def test_spiral_direction_follows_handedness():
    phis = np.linspace(0.0, 2 * math.pi, 50)
    assert np.all(np.diff(spiral_curve(40, LRCP, phis)) > 0)
    assert np.all(np.diff(spiral_curve(40, RLCP, phis)) < 0)


def test_spiral_indices():
    assert spiral_indices(LRCP, 0.0, 1.2) == list(range(24, 50))
    assert spiral_indices(LLCP, 0.2, 0.95) == list(range(33, 44))


def test_spiral_pitch_value():
    assert spiral_pitch(0.6, LRCP) == pytest.approx(12.862, abs=1e-3)
    assert spiral_pitch(0.6, RLCP) == pytest.approx(12.862, abs=1e-3)


def test_spiral_pitch_scales_with_delay():
    doubled = SpiralPrediction(T=200.0, ell=4, delta1=1, delta2=-1)
    assert spiral_pitch(0.6, doubled) == pytest.approx(2 * spiral_pitch(0.6, LRCP))


def test_spiral_pitch_matches_curve_slope():
    phi, h = 1.3, 1e-6
    q_lo = spiral_radius(phi - h, 40, LRCP)
    q_hi = spiral_radius(phi + h, 40, LRCP)
    q_mid = spiral_radius(phi, 40, LRCP)
    assert 2 * h / (q_hi - q_lo) == pytest.approx(spiral_pitch(q_mid, LRCP), rel=1e-6)


def test_pitch_needs_opposite_handedness():
    with pytest.raises(DegeneratePredictionError):
        spiral_pitch(0.6, LLCP)


def test_estimate_delay_inverts_pitch():
    pitch = spiral_pitch(0.45, LRCP)
    assert estimate_delay(pitch, 0.45, 4, 1, -1) == pytest.approx(100.0)
    with pytest.raises(DegeneratePredictionError):
        estimate_delay(pitch, 0.45, 4, 1, 1)
    with pytest.raises(PredictionError):
        estimate_delay(pitch, 0.0, 4, 1, -1)


def test_envelope_is_maximal_on_spiral():
    for phi in (0.2, 2.5, 5.0):
        q = spiral_radius(phi, 40, LRCP)
        assert envelope(q, phi, LRCP) == pytest.approx(2.0)


def test_envelope_bounds():
    q, phi = np.meshgrid(np.linspace(0.0, 1.2, 50), np.linspace(-math.pi, math.pi, 60))
    values = envelope(q, phi, RLCP)
    assert values.min() >= 0.0 and values.max() <= 2.0


@pytest.mark.parametrize("p", [LRCP, RLCP, SpiralPrediction(T=30.0, ell=3, delta1=1, delta2=-1)])
def test_envelope_maxima_on_circle_equal_arm_count(p):
    phis = np.linspace(0.0, 2 * math.pi, 3600, endpoint=False)
    values = envelope(0.5, phis, p)
    maxima = (values > np.roll(values, 1)) & (values >= np.roll(values, -1))
    assert maxima.sum() == arm_count(p) == 2 * p.ell


def test_equal_handedness_has_no_arms():
    assert arm_count(LLCP) == 0


def test_photon_number_from_arms():
    assert photon_number_from_arms(8, 1, -1) == 4
    with pytest.raises(DegeneratePredictionError):
        photon_number_from_arms(8, 1, 1)
    with pytest.raises(PredictionError):
        photon_number_from_arms(7, 1, -1)


def test_rotation_angle():
    assert rotation_angle(math.pi / 2, -1) == pytest.approx(-math.pi / 4)
    assert rotation_angle(math.pi / 2, 1) == pytest.approx(math.pi / 4)


def test_effective_mass_and_ring():
    m_star = effective_mass(0.1, 0.6)
    assert m_star == pytest.approx(1.01379, abs=1e-5)
    assert photon_number(0.6) == 4
    assert photon_number(0.6, m_star) == 4
    assert photon_number(2.5) == 1
    assert ring_radius(4, 0.6, m_star) == pytest.approx(0.642, abs=1e-3)
    assert ring_radius(4, 0.6) == pytest.approx(math.sqrt(0.44))
    assert ring_radius(3, 0.6) is None


def test_photon_number_at_exact_threshold():
    assert photon_number(0.5) == 4


def test_photon_number_needs_positive_frequency():
    with pytest.raises(PredictionError):
        photon_number(0.0)


@pytest.mark.parametrize("kwargs", [{"T": 0.0}, {"T": 100.0, "delta1": 0}, {"T": 1.0, "ell": 0}])
def test_prediction_parameters_validated(kwargs):
    with pytest.raises(ValidationError):
        SpiralPrediction(**kwargs)
