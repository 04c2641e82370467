# src/common/pair_production/dhw.py
"""
DHW equations of motion for a spatially homogeneous field.

For each canonical momentum q the ten Wigner components (f, v, a, t) obey a
closed ODE system driven by E(t). The vector potential is carried as three
extra state components (dA/dt = -E) so that the kinetic momentum
p = q - A(t) stays consistent with the step control.
"""
import logging
import math
import warnings
from typing import Optional

import numpy as np
from numba import njit
from scipy.integrate import DOP853

from src.common.constants import OCCUPATION_TOLERANCE
from src.common.errors import IntegrationBlowup, OccupationWarning, StepBudgetExceeded
from src.common.field_model import FieldConfig, pulse_centers, pulse_field
from src.common.pair_production.states import Momentum, SolveResult, SolverSettings, WignerState

logger = logging.getLogger(__name__)

STATE_SIZE = 13


@njit(cache=True)
def dhw_kernel(t: float, y: np.ndarray, params: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Right-hand side on the flat 13-component state (f, v, a, t, A); params from kernel_params."""
    ex, ey = pulse_field(t, params)
    f = y[0]
    vx, vy, vz = y[1], y[2], y[3]
    ax, ay, az = y[4], y[5], y[6]
    tx, ty, tz = y[7], y[8], y[9]
    px, py, pz = q[0] - y[10], q[1] - y[11], q[2] - y[12]

    omega2 = 1.0 + px * px + py * py + pz * pz
    omega = math.sqrt(omega2)
    e_dot_v = ex * vx + ey * vy
    e_dot_p = ex * px + ey * py
    p_dot_v = px * vx + py * vy + pz * vz
    src = 2.0 * (f - 1.0) / (omega2 * omega)
    drag = e_dot_v / omega2

    dy = np.empty(STATE_SIZE)
    dy[0] = e_dot_v / (2.0 * omega)
    dy[1] = src * (e_dot_p * px - ex * omega2) - drag * px - 2.0 * (py * az - pz * ay) - 2.0 * tx
    dy[2] = src * (e_dot_p * py - ey * omega2) - drag * py - 2.0 * (pz * ax - px * az) - 2.0 * ty
    dy[3] = src * (e_dot_p * pz) - drag * pz - 2.0 * (px * ay - py * ax) - 2.0 * tz
    dy[4] = -2.0 * (py * vz - pz * vy)
    dy[5] = -2.0 * (pz * vx - px * vz)
    dy[6] = -2.0 * (px * vy - py * vx)
    # +(p.v)p keeps free precession of (v, t) at 2*Omega for every |p|
    dy[7] = 2.0 * (vx + p_dot_v * px)
    dy[8] = 2.0 * (vy + p_dot_v * py)
    dy[9] = 2.0 * (vz + p_dot_v * pz)
    dy[10] = -ex
    dy[11] = -ey
    dy[12] = 0.0
    return dy


def derivatives(t: float, y: np.ndarray, cfg: FieldConfig, q: np.ndarray) -> np.ndarray:
    """Right-hand side for a FieldConfig; see dhw_kernel."""
    return dhw_kernel(float(t), np.asarray(y, dtype=float), cfg.kernel_params(),
                      np.asarray(q, dtype=float))


def rhs(cfg: FieldConfig, q: Momentum, t: float, s: WignerState) -> WignerState:
    """
    Time derivative of a Wigner state.

    Args:
        cfg: Field parameters
        q: Canonical momentum
        t: Time in units of 1/m
        s: Current state (its A component defines the kinetic momentum)

    Returns:
        WignerState holding the derivatives of every component
    """
    return WignerState.from_array(derivatives(t, s.to_array(), cfg, q.as_array()))


def integration_window(cfg: FieldConfig, settings: SolverSettings) -> tuple[float, float]:
    """Start and end times, pad * tau beyond the outermost pulse centers."""
    centers = pulse_centers(cfg)
    margin = settings.pad * cfg.tau
    return min(centers) - margin, max(centers) + margin


def _max_step(cfg: FieldConfig) -> float:
    # Steps never exceed a quarter of min(tau, carrier period).
    return min(cfg.tau, 2.0 * math.pi / cfg.omega) / 4.0


def _check_final(f: float, q: Momentum) -> None:
    if f < -OCCUPATION_TOLERANCE:
        logger.warning("negative occupation f = %.3g at q = %s", f, q.as_array())
    if f > 1.0:
        msg = f"occupation f = {f:.6g} exceeds 1 at q = {tuple(q.as_array())}"
        logger.warning(msg)
        warnings.warn(msg, OccupationWarning, stacklevel=3)


def integrate_single(
    cfg: FieldConfig,
    q: Momentum,
    settings: Optional[SolverSettings] = None,
    trajectory: bool = False,
) -> SolveResult:
    """
    Integrate the DHW system for one momentum from the vacuum state.

    Uses the embedded 8(5,3) Dormand-Prince pair with adaptive step control.

    Args:
        cfg: Field parameters
        q: Canonical momentum
        settings: Tolerances, window padding and step budget
        trajectory: Also return every accepted (t, state)

    Returns:
        SolveResult with the final occupation and state

    Raises:
        StepBudgetExceeded: More than settings.max_steps steps were needed
        IntegrationBlowup: The state became non-finite or the solver failed
    """
    settings = settings or SolverSettings()
    t_i, t_f = integration_window(cfg, settings)
    q_arr = np.asarray(q.as_array(), dtype=float)
    params = cfg.kernel_params()

    solver = DOP853(
        lambda t, y: dhw_kernel(t, y, params, q_arr),
        t_i,
        WignerState.vacuum().to_array(),
        t_f,
        max_step=_max_step(cfg),
        rtol=settings.rel_tol,
        atol=settings.abs_tol,
    )

    times = [t_i] if trajectory else None
    states = [solver.y.copy()] if trajectory else None
    n_steps = 0
    while solver.status == "running":
        if n_steps >= settings.max_steps:
            raise StepBudgetExceeded(solver.t, settings.max_steps)
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationBlowup(solver.t, message or "solver failed")
        n_steps += 1
        if not np.all(np.isfinite(solver.y)):
            raise IntegrationBlowup(solver.t)
        if trajectory:
            times.append(solver.t)
            states.append(solver.y.copy())

    f = float(solver.y[0])
    _check_final(f, q)
    return SolveResult(
        f=f,
        final_state=WignerState.from_array(solver.y),
        t_initial=t_i,
        t_final=t_f,
        n_steps=n_steps,
        times=np.asarray(times) if trajectory else None,
        states=np.asarray(states) if trajectory else None,
    )


def solve_single(
    cfg: FieldConfig, q: Momentum, settings: Optional[SolverSettings] = None
) -> float:
    """Asymptotic one-particle distribution f(q, t_f) for a single momentum."""
    return integrate_single(cfg, q, settings).f


def integrate_fixed_rk4(
    cfg: FieldConfig,
    q: Momentum,
    n_steps: int,
    settings: Optional[SolverSettings] = None,
) -> SolveResult:
    """
    Classical fixed-step RK4 over the same window, used as an independent cross-check.

    Args:
        cfg: Field parameters
        q: Canonical momentum
        n_steps: Number of equal steps across the window
        settings: Only the window padding is used

    Returns:
        SolveResult with the final occupation and state
    """
    settings = settings or SolverSettings()
    t_i, t_f = integration_window(cfg, settings)
    q_arr = np.asarray(q.as_array(), dtype=float)
    params = cfg.kernel_params()
    h = (t_f - t_i) / n_steps
    y = WignerState.vacuum().to_array()
    for n in range(n_steps):
        t = t_i + n * h
        k1 = dhw_kernel(t, y, params, q_arr)
        k2 = dhw_kernel(t + 0.5 * h, y + 0.5 * h * k1, params, q_arr)
        k3 = dhw_kernel(t + 0.5 * h, y + 0.5 * h * k2, params, q_arr)
        k4 = dhw_kernel(t + h, y + h * k3, params, q_arr)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationBlowup(t + h)
    return SolveResult(
        f=float(y[0]),
        final_state=WignerState.from_array(y),
        t_initial=t_i,
        t_final=t_f,
        n_steps=n_steps,
    )
