"""
Two-pulse circularly polarized electric field.

Defines the spatially homogeneous field made of two Gaussian-enveloped,
circularly polarized pulses separated by a time delay, together with its
derived quantities. Natural units are used throughout: m = e = 1, so the
critical field is 1, times are in 1/m and frequencies and momenta in m.
"""
import logging
import math
from typing import Tuple, Union

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.integrate import quad

from src.common.config import (
    DEFAULT_E0,
    DEFAULT_OMEGA,
    DEFAULT_PHI1,
    DEFAULT_TAU,
    REFERENCE_PAD,
)
from src.common.errors import ConfigError, UndefinedParameterError

logger = logging.getLogger(__name__)

TimeLike = Union[float, np.ndarray]


class FieldConfig(BaseModel):
    """
    Parameters of the two-pulse field, in natural units.

    Attributes:
        E0: Field-strength scale (units of the critical field)
        delta1: Handedness of pulse 1 (+1 left, -1 right, 0 linear along x)
        delta2: Handedness of pulse 2
        omega: Carrier angular frequency (units of m)
        tau: Gaussian pulse duration (units of 1/m)
        phi1: Carrier envelope phase of pulse 1 (radians)
        phi2: Carrier envelope phase of pulse 2 (radians)
        T_delay: Center-to-center delay of pulse 2 (units of 1/m)
        amp2_scale: Multiplier on the pulse-2 amplitude; 0 gives a single pulse
        t0: Center of pulse 1 (units of 1/m)
    """

    model_config = ConfigDict(frozen=True)

    E0: float = Field(default=DEFAULT_E0, ge=0.0)
    delta1: int = 1
    delta2: int = 1
    omega: float = Field(default=DEFAULT_OMEGA, gt=0.0)
    tau: float = Field(default=DEFAULT_TAU, gt=0.0)
    phi1: float = DEFAULT_PHI1
    phi2: float = 0.0
    T_delay: float = 0.0
    amp2_scale: float = Field(default=0.0, ge=0.0)
    t0: float = 0.0

    @field_validator("delta1", "delta2")
    @classmethod
    def _check_handedness(cls, value: int) -> int:
        if value not in (-1, 0, 1):
            raise ValueError("handedness must be -1, 0 or +1")
        return value

    @classmethod
    def from_amplitudes(
        cls, E1: float, E2: float, delta1: int = 1, delta2: int = 1, **kwargs
    ) -> "FieldConfig":
        """Build a config from the pulse amplitudes E1, E2 instead of E0.

        Args:
            E1: Amplitude of pulse 1
            E2: Amplitude of pulse 2
            delta1: Handedness of pulse 1
            delta2: Handedness of pulse 2
            **kwargs: Remaining FieldConfig fields

        Returns:
            FieldConfig whose derived amplitudes equal E1 and E2
        """
        E0 = E1 * math.sqrt(1 + delta1**2)
        if E0 == 0.0:
            if E2 != 0.0:
                raise ConfigError("E2 > 0 requires E1 > 0", key="field.E1")
            return cls(E0=0.0, delta1=delta1, delta2=delta2, amp2_scale=0.0, **kwargs)
        amp2_scale = E2 * math.sqrt(1 + delta2**2) / E0
        return cls(E0=E0, delta1=delta1, delta2=delta2, amp2_scale=amp2_scale, **kwargs)

    @property
    def E1(self) -> float:
        return self.E0 / math.sqrt(1 + self.delta1**2)

    @property
    def E2(self) -> float:
        return self.amp2_scale * (self.E0 / math.sqrt(1 + self.delta2**2))

    @property
    def has_second_pulse(self) -> bool:
        return self.amp2_scale > 0.0

    def kernel_params(self) -> np.ndarray:
        """Flat float array consumed by the compiled field and DHW kernels (see pulse_field)."""
        return np.array([
            self.E1, self.E2, self.omega, self.tau, self.phi1, self.phi2,
            float(self.delta1), float(self.delta2), self.t0, self.T_delay,
        ])

    def rotated(self, alpha: float) -> "FieldConfig":
        """Return the field rotated about the z axis by alpha (counterclockwise).

        A circular pulse rotated by alpha equals the same pulse with its CEP
        shifted by delta * alpha. Linear pulses (delta = 0) cannot be rotated
        within this parametrization.
        """
        for delta, active, name in (
            (self.delta1, self.E0 > 0, "field.delta1"),
            (self.delta2, self.E0 > 0 and self.has_second_pulse, "field.delta2"),
        ):
            if active and delta == 0:
                raise ConfigError("linear pulses cannot be rotated", key=name)
        return self.model_copy(
            update={
                "phi1": self.phi1 + self.delta1 * alpha,
                "phi2": self.phi2 + self.delta2 * alpha,
            }
        )

    def shifted(self, dt: float) -> "FieldConfig":
        """Return the field with both pulse centers moved later by dt."""
        return self.model_copy(update={"t0": self.t0 + dt})


def pulse_centers(cfg: FieldConfig) -> Tuple[float, ...]:
    """Centers of the pulses that carry amplitude (pulse 2 only if amp2_scale > 0)."""
    if cfg.has_second_pulse:
        return (cfg.t0, cfg.t0 + cfg.T_delay)
    return (cfg.t0,)


def handedness_label(cfg: FieldConfig) -> str:
    """Short label such as 'LRCP' (L for delta = +1, R for -1, lin for 0)."""
    names = {1: "L", -1: "R", 0: "lin"}
    if not cfg.has_second_pulse:
        return f"{names[cfg.delta1]}CP" if cfg.delta1 else "linear"
    if cfg.delta1 and cfg.delta2:
        return f"{names[cfg.delta1]}{names[cfg.delta2]}CP"
    return f"{names[cfg.delta1]}-{names[cfg.delta2]}"


@njit(cache=True)
def pulse_field(t: float, params: np.ndarray) -> Tuple[float, float]:
    """(Ex, Ey) at time t from FieldConfig.kernel_params()."""
    E1, E2, omega, tau = params[0], params[1], params[2], params[3]
    phi1, phi2, delta1, delta2 = params[4], params[5], params[6], params[7]
    t0, T_delay = params[8], params[9]
    inv_two_tau2 = 0.5 / (tau * tau)
    s1 = t - t0
    env1 = E1 * math.exp(-s1 * s1 * inv_two_tau2)
    ph1 = omega * s1 + phi1
    ex = env1 * math.cos(ph1)
    ey = env1 * (delta1 * math.sin(ph1))
    s2 = s1 - T_delay
    env2 = E2 * math.exp(-s2 * s2 * inv_two_tau2)
    ph2 = omega * s2 + phi2
    ex += env2 * math.cos(ph2)
    ey += env2 * (delta2 * math.sin(ph2))
    return ex, ey


def field_components(cfg: FieldConfig, t: float) -> Tuple[float, float]:
    """Scalar (Ex, Ey) at time t; Ez is identically zero."""
    return pulse_field(float(t), cfg.kernel_params())


def electric_field(cfg: FieldConfig, t: TimeLike) -> np.ndarray:
    """
    Electric field of the two-pulse configuration.

    Args:
        cfg: Field parameters
        t: Time (scalar or array) in units of 1/m

    Returns:
        Array of shape (3,) for scalar t, or (3, n) for an array of n times.
        The z component is exactly 0.
    """
    if np.ndim(t) == 0:
        ex, ey = field_components(cfg, float(t))
        return np.array([ex, ey, 0.0])
    times = np.asarray(t, dtype=float)
    params = cfg.kernel_params()
    out = np.zeros((3,) + times.shape)
    for idx, ti in np.ndenumerate(times):
        out[(0,) + idx], out[(1,) + idx] = pulse_field(float(ti), params)
    return out


def reference_lower_limit(cfg: FieldConfig) -> float:
    """Start of the vector-potential integral, where both envelopes are negligible."""
    return min(cfg.t0, cfg.t0 + cfg.T_delay) - REFERENCE_PAD * cfg.tau


def vector_potential_reference(cfg: FieldConfig, t: float) -> np.ndarray:
    """
    Vector potential A(t) = -integral of E from the lower limit to t, by adaptive quadrature.

    This is the independent reference for the vector potential that the DHW
    solver carries in its augmented state.

    Args:
        cfg: Field parameters
        t: Time in units of 1/m

    Returns:
        Array of shape (3,), z component 0
    """
    t_lo = reference_lower_limit(cfg)
    if t == t_lo or cfg.E0 == 0.0:
        return np.zeros(3)
    lo, hi = min(t_lo, t), max(t_lo, t)
    # Break points at the pulse centers and every tau keep quad on the oscillations
    breaks = np.arange(lo, hi, cfg.tau)[1:].tolist()
    breaks += [c for c in (cfg.t0, cfg.t0 + cfg.T_delay) if lo < c < hi]
    params = cfg.kernel_params()
    result = np.zeros(3)
    for axis in (0, 1):
        value, abserr = quad(
            lambda s: pulse_field(s, params)[axis],
            t_lo,
            t,
            points=sorted(set(breaks)) or None,
            limit=2000,
            epsabs=1e-13,
            epsrel=1e-12,
        )
        if abserr > 1e-10:
            logger.warning("vector potential quadrature error %.3g exceeds 1e-10", abserr)
        result[axis] = -value
    return result


def keldysh_gamma(cfg: FieldConfig) -> float:
    """Keldysh adiabaticity parameter gamma = m*omega/(e*E0), i.e. omega/E0 here."""
    if cfg.E0 <= 0.0:
        raise UndefinedParameterError("Keldysh parameter undefined for E0 = 0", key="field.E0")
    return cfg.omega / cfg.E0
