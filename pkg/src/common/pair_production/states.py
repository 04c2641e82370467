from datetime import datetime, timezone
from typing import Iterator, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.common.config import (
    CODE_VERSION,
    DEFAULT_ABS_TOL,
    DEFAULT_GRID_3D_POINTS,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_STEPS,
    DEFAULT_PAD,
    DEFAULT_Q_WINDOW,
    DEFAULT_REL_TOL,
)
from src.common.field_model import FieldConfig

Vec3 = Tuple[float, float, float]
ZERO3: Vec3 = (0.0, 0.0, 0.0)


class Momentum(BaseModel):
    """
    Canonical momentum of a pair mode (units of m).

    Attributes:
        qx: Component along x
        qy: Component along y
        qz: Component along z (perpendicular to the polarization plane)
    """
    model_config = ConfigDict(frozen=True)

    qx: float = 0.0
    qy: float = 0.0
    qz: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.qx, self.qy, self.qz])

    def rotated(self, alpha: float) -> "Momentum":
        """Rotate about the z axis by alpha (counterclockwise)."""
        c, s = np.cos(alpha), np.sin(alpha)
        return Momentum(qx=c * self.qx - s * self.qy, qy=s * self.qx + c * self.qy, qz=self.qz)


class WignerState(BaseModel):
    """
    Dynamical DHW components for one momentum, plus the augmented vector potential.

    Attributes:
        f: One-particle distribution (occupation)
        v: Auxiliary vector quantity
        a_vec: Wigner component (axial vector)
        t_vec: Wigner component (tensor part)
        A: Vector potential carried along with the state (units of m/e)
    """
    f: float = 0.0
    v: Vec3 = ZERO3
    a_vec: Vec3 = ZERO3
    t_vec: Vec3 = ZERO3
    A: Vec3 = ZERO3

    @classmethod
    def vacuum(cls) -> "WignerState":
        return cls()

    @classmethod
    def from_array(cls, y: np.ndarray) -> "WignerState":
        vals = [float(x) for x in y]
        return cls(f=vals[0], v=tuple(vals[1:4]), a_vec=tuple(vals[4:7]),
                   t_vec=tuple(vals[7:10]), A=tuple(vals[10:13]))

    def to_array(self) -> np.ndarray:
        return np.array([self.f, *self.v, *self.a_vec, *self.t_vec, *self.A])


class SolverSettings(BaseModel):
    """
    Tolerances and limits for the per-momentum integration.

    Attributes:
        rel_tol: Relative local error tolerance
        abs_tol: Absolute local error tolerance
        pad: Integration window padding beyond the outer pulse centers, in units of tau
        max_steps: Maximum number of accepted steps before giving up
    """
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=DEFAULT_REL_TOL, gt=0.0)
    abs_tol: float = Field(default=DEFAULT_ABS_TOL, gt=0.0)
    pad: float = Field(default=DEFAULT_PAD, ge=5.0)
    max_steps: int = Field(default=DEFAULT_MAX_STEPS, gt=0)


class SolveResult(BaseModel):
    """
    Outcome of one DHW integration.

    Attributes:
        f: Final occupation f(q, t_f)
        final_state: Full state at t_f
        t_initial: Start of the integration window
        t_final: End of the integration window
        n_steps: Accepted steps
        times: Trajectory times (only when requested)
        states: Trajectory states, shape (n, 13) (only when requested)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    f: float
    final_state: WignerState
    t_initial: float
    t_final: float
    n_steps: int
    times: Optional[np.ndarray] = None
    states: Optional[np.ndarray] = None


class GridSpec(BaseModel):
    """
    Uniform 2D momentum grid in the (qx, qy) plane at fixed qz.

    Attributes:
        qx_min, qx_max, nx: Extent and node count along qx
        qy_min, qy_max, ny: Extent and node count along qy
        qz: Fixed out-of-plane momentum
    """
    model_config = ConfigDict(frozen=True)

    qx_min: float = -DEFAULT_Q_WINDOW
    qx_max: float = DEFAULT_Q_WINDOW
    nx: int = Field(default=DEFAULT_GRID_POINTS, ge=2)
    qy_min: float = -DEFAULT_Q_WINDOW
    qy_max: float = DEFAULT_Q_WINDOW
    ny: int = Field(default=DEFAULT_GRID_POINTS, ge=2)
    qz: float = 0.0

    @model_validator(mode="after")
    def _check_extent(self) -> "GridSpec":
        if self.qx_max <= self.qx_min or self.qy_max <= self.qy_min:
            raise ValueError("grid max must exceed min on both axes")
        return self

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.qx_min, self.qx_max, self.nx),
                np.linspace(self.qy_min, self.qy_max, self.ny))

    def nodes(self) -> Iterator[Momentum]:
        """Grid nodes in row-major order (qx outer, qy inner)."""
        qx, qy = self.axes()
        for x in qx:
            for y in qy:
                yield Momentum(qx=float(x), qy=float(y), qz=self.qz)


class Grid3DSpec(BaseModel):
    """Uniform cubic momentum grid for the full number density."""
    model_config = ConfigDict(frozen=True)

    q_min: float = -DEFAULT_Q_WINDOW
    q_max: float = DEFAULT_Q_WINDOW
    n: int = Field(default=DEFAULT_GRID_3D_POINTS, ge=2)

    @model_validator(mode="after")
    def _check_extent(self) -> "Grid3DSpec":
        if self.q_max <= self.q_min:
            raise ValueError("grid max must exceed min")
        return self

    def axis(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n)


class SliceSpec(BaseModel):
    """
    1D momentum scan along a coordinate axis.

    Attributes:
        axis: Coordinate that varies
        q_min, q_max, n: Scan range and point count
        fixed: The other two components, in (x, y, z) order with the scanned one skipped
    """
    model_config = ConfigDict(frozen=True)

    axis: Literal["x", "y", "z"] = "x"
    q_min: float = 0.2
    q_max: float = 0.95
    n: int = Field(default=2000, ge=2)
    fixed: Tuple[float, float] = (0.0, 0.0)

    @model_validator(mode="after")
    def _check_extent(self) -> "SliceSpec":
        if self.q_max <= self.q_min:
            raise ValueError("slice max must exceed min")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n)

    def momentum(self, q: float) -> Momentum:
        a, b = self.fixed
        if self.axis == "x":
            return Momentum(qx=q, qy=a, qz=b)
        if self.axis == "y":
            return Momentum(qx=a, qy=q, qz=b)
        return Momentum(qx=a, qy=b, qz=q)


class Provenance(BaseModel):
    """Where a result came from."""
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    code_version: str = CODE_VERSION


class SpectrumGrid(BaseModel):
    """
    Final distribution values over a 2D momentum grid.

    Attributes:
        values: Array of shape (nx, ny); values[i, j] is f at (qx_i, qy_j)
        grid: The momentum grid
        cfg: Field that produced the spectrum
        solver: Solver settings used
        provenance: Timestamp and code version
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray
    grid: GridSpec
    cfg: FieldConfig
    solver: SolverSettings
    provenance: Provenance = Field(default_factory=Provenance)

    @model_validator(mode="after")
    def _check_values(self) -> "SpectrumGrid":
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.ny})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum contains non-finite values")
        return self

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.grid.axes()


class MomentumSlice(BaseModel):
    """
    Final distribution values along a 1D momentum scan.

    Attributes:
        q: Scanned coordinate values (ascending)
        f: Final occupation at each point
        spec: The scan specification
        cfg: Field that produced the slice
        solver: Solver settings used
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    q: np.ndarray
    f: np.ndarray
    spec: SliceSpec
    cfg: FieldConfig
    solver: SolverSettings
    provenance: Provenance = Field(default_factory=Provenance)

    def as_pairs(self) -> List[Tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.q, self.f)]
