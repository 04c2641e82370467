"""
Semiclassical interference predictions.

Closed-form, shape-only predictions for two time-delayed pulses: the phase
accumulated between the pulses, Ramsey fringe positions for equal
handedness, Archimedean spiral fringes for opposite handedness, the
interference envelope on the polarization plane, the CEP rotation angle and
the spiral pitch. The amplitude envelope of a single pulse is not modeled,
so only positions, counts and slopes are meaningful, never heights.
"""
import math
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.common.errors import DegeneratePredictionError, PredictionError

ArrayLike = Union[float, np.ndarray]


class SpiralPrediction(BaseModel):
    """
    Parameters of a fringe/spiral prediction.

    Attributes:
        T: Time delay between the pulses (units of 1/m)
        ell: Number of absorbed photons
        delta1: Handedness of pulse 1
        delta2: Handedness of pulse 2
        k_range: Inclusive (first, last) fringe index to enumerate
    """
    model_config = ConfigDict(frozen=True)

    T: float = Field(gt=0.0)
    ell: int = Field(default=4, ge=1)
    delta1: int = 1
    delta2: int = -1
    k_range: Tuple[int, int] = (33, 43)

    @field_validator("delta1", "delta2")
    @classmethod
    def _check_circular(cls, value: int) -> int:
        if value not in (-1, 1):
            raise ValueError("spiral predictions need circular pulses (delta = +1 or -1)")
        return value

    @property
    def handedness_difference(self) -> int:
        return self.delta2 - self.delta1

    @property
    def indices(self) -> List[int]:
        return list(range(self.k_range[0], self.k_range[1] + 1))


def theta0(q: ArrayLike, T: float) -> ArrayLike:
    """Phase accumulated between the pulses, 2 sqrt(q^2 + m^2) T."""
    return 2.0 * np.sqrt(np.square(q) + 1.0) * T


def ramsey_peaks(T: float, k: int) -> Optional[float]:
    """
    Position of the k-th Ramsey fringe maximum on the qx axis.

    Args:
        T: Time delay (> 0)
        k: Fringe index

    Returns:
        sqrt((k pi / T)^2 - 1), or None when k pi / T < 1
    """
    if T <= 0.0:
        raise PredictionError("fringe positions need a positive delay")
    x = k * math.pi / T
    if x < 1.0:
        return None
    return math.sqrt(x * x - 1.0)


def ramsey_indices(T: float, q_min: float, q_max: float) -> List[int]:
    """Fringe indices k whose maxima fall inside [q_min, q_max]."""
    lo = math.ceil(T * math.sqrt(max(q_min, 0.0) ** 2 + 1.0) / math.pi)
    hi = math.floor(T * math.sqrt(q_max**2 + 1.0) / math.pi)
    return [k for k in range(lo, hi + 1) if ramsey_peaks(T, k) is not None]


def spiral_radius(phi: float, kprime: int, p: SpiralPrediction) -> Optional[float]:
    """
    Radius of the k'-th spiral fringe maximum at azimuth phi.

    The bracket (2 k' pi - (delta2 - delta1) ell phi) / 2T must be at least 1;
    negative brackets are the same curves with k' -> -k' and are not returned.
    """
    bracket = (2.0 * kprime * math.pi - p.handedness_difference * p.ell * phi) / (2.0 * p.T)
    if bracket < 1.0:
        return None
    return math.sqrt(bracket * bracket - 1.0)


def spiral_curve(kprime: int, p: SpiralPrediction, phis: np.ndarray) -> np.ndarray:
    """Spiral radius over an array of azimuths; NaN where no real root exists."""
    bracket = (2.0 * kprime * np.pi - p.handedness_difference * p.ell * np.asarray(phis)) / (
        2.0 * p.T
    )
    radicand = np.maximum(np.square(bracket) - 1.0, 0.0)
    return np.where(bracket >= 1.0, np.sqrt(radicand), np.nan)


def spiral_indices(p: SpiralPrediction, q_min: float, q_max: float) -> List[int]:
    """Spiral indices k' that reach radii inside [q_min, q_max] for some azimuth."""
    sweep = 2.0 * math.pi * p.handedness_difference * p.ell
    b_lo = math.sqrt(max(q_min, 0.0) ** 2 + 1.0)
    b_hi = math.sqrt(q_max**2 + 1.0)
    lo = math.ceil((2.0 * p.T * b_lo + min(0.0, sweep)) / (2.0 * math.pi))
    hi = math.floor((2.0 * p.T * b_hi + max(0.0, sweep)) / (2.0 * math.pi))
    return list(range(lo, hi + 1))


def spiral_pitch(q: float, p: SpiralPrediction) -> float:
    """
    Absolute azimuthal winding |d phi / d q| of a spiral fringe at radius q.

    Raises:
        DegeneratePredictionError: delta1 == delta2 (rings, no winding)
    """
    if p.handedness_difference == 0:
        raise DegeneratePredictionError("equal handedness gives rings, not spirals")
    return abs(2.0 * p.T / (p.handedness_difference * p.ell)) * q / math.sqrt(q * q + 1.0)


def estimate_delay(pitch: float, q: float, ell: int, delta1: int, delta2: int) -> float:
    """Time delay that reproduces a measured spiral pitch at radius q."""
    if delta1 == delta2:
        raise DegeneratePredictionError("equal handedness gives rings, not spirals")
    if q <= 0.0:
        raise PredictionError("pitch is only defined for q > 0")
    return pitch * abs(delta2 - delta1) * ell * math.sqrt(q * q + 1.0) / (2.0 * q)


def envelope(q: ArrayLike, phi: ArrayLike, p: SpiralPrediction) -> ArrayLike:
    """Interference factor 1 + cos(theta0(q) + (delta2 - delta1) ell phi), in [0, 2]."""
    return 1.0 + np.cos(theta0(q, p.T) + p.handedness_difference * p.ell * np.asarray(phi))


def arm_count(p: SpiralPrediction) -> int:
    """Number of spiral arms, |delta2 - delta1| ell (0 for rings)."""
    return abs(p.handedness_difference) * p.ell


def photon_number_from_arms(arms: int, delta1: int, delta2: int) -> int:
    """Invert arm_count: photon number from an observed number of spiral arms."""
    if delta1 == delta2:
        raise DegeneratePredictionError("equal handedness gives rings, not spirals")
    ell, rest = divmod(arms, abs(delta2 - delta1))
    if rest or ell < 1:
        raise PredictionError(f"{arms} arms is not a multiple of {abs(delta2 - delta1)}")
    return ell


def rotation_angle(dphi: float, delta2: int) -> float:
    """Spectrum rotation delta2 * dphi / 2; negative means clockwise."""
    return delta2 * dphi / 2.0


def effective_mass(E1: float, omega: float) -> float:
    """Field-dressed mass sqrt(1 + E1^2 / omega^2) of a circularly polarized pulse."""
    return math.sqrt(1.0 + (E1 / omega) ** 2)


def photon_number(omega: float, m_star: float = 1.0) -> int:
    """Smallest photon number ell with ell * omega >= 2 m*."""
    if omega <= 0.0:
        raise PredictionError("photon number needs omega > 0")
    return max(1, math.ceil(2.0 * m_star / omega - 1e-12))


def ring_radius(ell: int, omega: float, m_star: float = 1.0) -> Optional[float]:
    """Multiphoton ring radius from 2 sqrt(q^2 + m*^2) = ell omega."""
    radicand = (ell * omega / 2.0) ** 2 - m_star**2
    if radicand < 0.0:
        return None
    return math.sqrt(radicand)
