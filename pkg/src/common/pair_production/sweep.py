# src/common/pair_production/sweep.py
"""
Momentum sweeps over the DHW solver.

Maps solve_single over momentum grids and slices in parallel and integrates
the resulting distributions into number densities. Nodes are independent;
results are placed by index, so the output does not depend on the number of
workers or their schedule.
"""
import logging
import math
import time
import warnings
from typing import Callable, List, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy.integrate import trapezoid
from tqdm import tqdm

from src.common.constants import SUPPORT_BOUNDARY_FRAC
from src.common.errors import SolverError, SupportTruncationWarning, SweepNodeError
from src.common.field_model import FieldConfig
from src.common.pair_production.dhw import solve_single
from src.common.pair_production.states import (
    Grid3DSpec,
    GridSpec,
    Momentum,
    MomentumSlice,
    SliceSpec,
    SolverSettings,
    SpectrumGrid,
)

logger = logging.getLogger(__name__)


def _solve_node(cfg: FieldConfig, q: Momentum, settings: SolverSettings) -> float:
    """Solve one node, attaching its coordinates to any solver failure."""
    try:
        return solve_single(cfg, q, settings)
    except SolverError as exc:
        raise SweepNodeError(q.qx, q.qy, q.qz, str(exc)) from exc


def _map_nodes(
    cfg: FieldConfig,
    momenta: List[Momentum],
    settings: SolverSettings,
    jobs: int,
    desc: str,
    progress: bool,
) -> np.ndarray:
    start = time.perf_counter()
    logger.info("%s: %d momentum nodes on %s worker(s)", desc, len(momenta), jobs)
    # Ordered generator: the bar advances as nodes complete, results stay index-addressed
    pending = Parallel(n_jobs=jobs, return_as="generator")(
        delayed(_solve_node)(cfg, q, settings) for q in momenta
    )
    results = np.empty(len(momenta), dtype=float)
    for i, f in enumerate(tqdm(pending, total=len(momenta), desc=desc, disable=not progress)):
        results[i] = f
    logger.info("%s: finished in %.1f s", desc, time.perf_counter() - start)
    return results


def compute_spectrum(
    cfg: FieldConfig,
    grid: Optional[GridSpec] = None,
    settings: Optional[SolverSettings] = None,
    jobs: int = 1,
    progress: bool = False,
) -> SpectrumGrid:
    """
    Final distribution over a 2D momentum grid.

    Args:
        cfg: Field parameters
        grid: Momentum grid (defaults to the polarization-plane window)
        settings: Solver settings
        jobs: Worker count for joblib (-1 for all cores)
        progress: Show a tqdm progress bar

    Returns:
        SpectrumGrid with values[i, j] = solve_single at (qx_i, qy_j)

    Raises:
        SweepNodeError: A node failed; carries its momentum coordinates
    """
    grid = grid or GridSpec()
    settings = settings or SolverSettings()
    flat = _map_nodes(cfg, list(grid.nodes()), settings, jobs, "spectrum", progress)
    return SpectrumGrid(
        values=flat.reshape(grid.nx, grid.ny),
        grid=grid,
        cfg=cfg,
        solver=settings,
    )


def compute_slice_1d(
    cfg: FieldConfig,
    slice_spec: Optional[SliceSpec] = None,
    settings: Optional[SolverSettings] = None,
    jobs: int = 1,
    progress: bool = False,
) -> MomentumSlice:
    """Final distribution along a 1D scan of one momentum component."""
    slice_spec = slice_spec or SliceSpec()
    settings = settings or SolverSettings()
    q = slice_spec.values()
    momenta = [slice_spec.momentum(float(x)) for x in q]
    f = _map_nodes(cfg, momenta, settings, jobs, f"slice q{slice_spec.axis}", progress)
    return MomentumSlice(q=q, f=f, spec=slice_spec, cfg=cfg, solver=settings)


def _check_support(values: np.ndarray) -> None:
    """Warn when the distribution has not decayed at the grid boundary."""
    peak = float(np.max(values)) if values.size else 0.0
    if peak <= 0.0:
        return
    boundary = []
    for axis in range(values.ndim):
        boundary.append(np.max(np.take(values, [0, -1], axis=axis)))
    edge = float(max(boundary))
    if edge >= SUPPORT_BOUNDARY_FRAC * peak:
        msg = (
            f"grid does not cover the support of f: boundary value {edge:.3g} "
            f"is {edge / peak:.2e} of the maximum"
        )
        logger.warning(msg)
        warnings.warn(msg, SupportTruncationWarning, stacklevel=3)


def density_2d(spec: SpectrumGrid) -> float:
    """
    Number density in the polarization plane, integral of f d^2q/(2 pi)^2.

    Uses the trapezoidal rule on the uniform grid; negative values (solver
    noise) are clamped to zero.

    Args:
        spec: Spectrum covering the support of f

    Returns:
        Density in units of m^2
    """
    values = np.clip(spec.values, 0.0, None)
    _check_support(values)
    qx, qy = spec.axes()
    inner = trapezoid(values, qy, axis=1)
    return float(trapezoid(inner, qx)) / (2.0 * math.pi) ** 2


def density_3d(
    cfg: FieldConfig,
    grid3d: Optional[Grid3DSpec] = None,
    settings: Optional[SolverSettings] = None,
    jobs: int = 1,
    progress: bool = False,
    distribution: Optional[Callable[[Momentum], float]] = None,
) -> float:
    """
    Full number density, integral of f d^3q/(2 pi)^3 on a cubic grid.

    Args:
        cfg: Field parameters
        grid3d: Cubic momentum grid (default 64 points per axis)
        settings: Solver settings
        jobs: Worker count
        progress: Show a progress bar
        distribution: Replaces the solver by an explicit f(q), for synthetic checks

    Returns:
        Density in units of m^3
    """
    grid3d = grid3d or Grid3DSpec()
    settings = settings or SolverSettings()
    axis = grid3d.axis()
    momenta = [
        Momentum(qx=float(x), qy=float(y), qz=float(z))
        for x in axis for y in axis for z in axis
    ]
    if distribution is None:
        flat = _map_nodes(cfg, momenta, settings, jobs, "density 3d", progress)
    else:
        flat = np.array([distribution(q) for q in momenta], dtype=float)
    values = np.clip(flat.reshape(grid3d.n, grid3d.n, grid3d.n), 0.0, None)
    _check_support(values)
    integral = trapezoid(trapezoid(trapezoid(values, axis, axis=2), axis, axis=1), axis)
    return float(integral) / (2.0 * math.pi) ** 3
