"""
Signature extraction from simulated momentum spectra.

Finds fringe peaks on 1D slices, decomposes rings of a 2D spectrum into
angular harmonics to count spiral arms and read their chirality, measures
the spiral pitch and the rotation between two spectra, and builds the
Table-1 comparison of simulated fringe peaks against the Ramsey formula.
"""
import logging
import math
import warnings
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy.interpolate import RegularGridInterpolator
from scipy.signal import find_peaks as _scipy_find_peaks

from src.common.config import TABLE1_K_MAX, TABLE1_K_MIN, TABLE1_POINTS, TABLE1_Q_MAX, TABLE1_Q_MIN
from src.common.constants import (
    CHIRALITY_SIGN,
    DEFAULT_MIN_PROMINENCE_FRAC,
    DEFAULT_N_RADII,
    DEFAULT_PROFILE_SAMPLES,
    DEFAULT_SUPPORT_FRAC,
    GOLDEN_TABLE1_PATH,
    GOLDEN_TOLERANCE,
    HARMONIC_DC_FRACTION,
    MAX_HARMONIC,
    TABLE1_ROW_LABELS,
)
from src.common.errors import (
    AnalysisError,
    EmptySliceError,
    FlatProfileError,
    HarmonicDisagreementWarning,
    PeakCountMismatch,
    PredictionError,
    RadiusOutsideGridError,
)
from src.common.field_model import FieldConfig
from src.common.pair_production.states import (
    GridSpec,
    MomentumSlice,
    SliceSpec,
    SolverSettings,
    SpectrumGrid,
)
from src.common.pair_production.sweep import compute_slice_1d
from src.common.semiclassical import (
    SpiralPrediction,
    envelope,
    estimate_delay,
    photon_number_from_arms,
    ramsey_peaks,
)

logger = logging.getLogger(__name__)

Chirality = Literal["counterclockwise", "clockwise", "none"]
SliceLike = Union[MomentumSlice, Sequence[Tuple[float, float]]]


# --- Report models ---

class Peak(BaseModel):
    """A refined local maximum of a 1D slice."""
    q: float
    f: float
    prominence: float


class Harmonic(BaseModel):
    """Angular Fourier coefficient c_k, averaged over the analysis rings."""
    index: int
    real: float
    imag: float

    @property
    def amplitude(self) -> float:
        return math.hypot(self.real, self.imag)


class Table1Row(BaseModel):
    """One fringe: simulated peak q_num against the Ramsey estimate q_eva."""
    index: int
    k: int
    q_num: float
    q_eva: float
    diff: float


class RingHarmonics(BaseModel):
    """
    Angular harmonic content of a spectrum on a set of rings.

    Attributes:
        radii: Ring radii analysed
        amplitudes: |c_k| per radius, k = 0..MAX_HARMONIC
        dominant_per_radius: Largest non-DC harmonic on each ring
        dominant: Largest non-DC harmonic of the ring-averaged amplitudes (0 for rings)
        contrast: Dominant amplitude over the next non-DC amplitude
        phase_slopes: d(arg c_dominant)/dq on each ring
        chirality: Winding sense of the fringes from inside to outside
    """
    radii: List[float]
    amplitudes: List[List[float]]
    dominant_per_radius: List[int]
    dominant: int = Field(ge=0)
    contrast: float
    phase_slopes: List[float]
    chirality: Chirality
    mean_harmonics: List[Harmonic]


class AnalysisReport(BaseModel):
    """
    Quantitative signatures of a spectrum or slice.

    Attributes:
        peaks: Slice peaks sorted ascending in q
        harmonics: Ring-averaged angular harmonics
        dominant_harmonic: Spiral arm count (0 for concentric rings)
        harmonic_contrast: Dominant amplitude over the next non-DC amplitude
        chirality: counterclockwise, clockwise or none
        rotation_estimate: Rotation against a reference spectrum (radians, + is counterclockwise)
        table1_rows: Fringe comparison rows
        q_in, q_out: Radial extent of the ring support
        measured_pitch: |d phi/d q| of the spiral fringes at pitch_q
        pitch_q: Radius where the pitch was measured
        delay_estimate: Time delay recovered from the measured pitch
        photon_number: Photon number recovered from the arm count
    """
    peaks: List[Peak] = []
    harmonics: List[Harmonic] = []
    dominant_harmonic: int = Field(default=0, ge=0)
    harmonic_contrast: Optional[float] = None
    chirality: Chirality = "none"
    rotation_estimate: Optional[float] = None
    table1_rows: List[Table1Row] = []
    q_in: Optional[float] = None
    q_out: Optional[float] = None
    measured_pitch: Optional[float] = None
    pitch_q: Optional[float] = None
    delay_estimate: Optional[float] = None
    photon_number: Optional[int] = None

    @property
    def radial_width(self) -> Optional[float]:
        if self.q_in is None or self.q_out is None:
            return None
        return self.q_out - self.q_in


class Table1Report(BaseModel):
    """Simulated fringe peaks paired with the Ramsey estimates."""
    T: float
    rows: List[Table1Row]

    @property
    def offsets_positive(self) -> bool:
        return all(row.diff > 0.0 for row in self.rows)

    def failures(
        self,
        golden: Optional[List[Table1Row]] = None,
        diff_range: Tuple[float, float] = (0.002, 0.015),
        tolerance: float = GOLDEN_TOLERANCE,
    ) -> List[str]:
        """Reasons this report fails the reproduction checks (empty when it passes)."""
        problems = []
        for row in self.rows:
            if row.diff <= 0.0:
                problems.append(f"row {row.index}: q_eva - q_num = {row.diff:.5f} is not positive")
            elif not diff_range[0] <= row.diff <= diff_range[1]:
                problems.append(
                    f"row {row.index}: q_eva - q_num = {row.diff:.5f} outside "
                    f"[{diff_range[0]}, {diff_range[1]}]"
                )
        if golden is not None:
            if len(golden) != len(self.rows):
                problems.append(f"{len(self.rows)} rows against {len(golden)} golden rows")
            for row, ref in zip(self.rows, golden):
                if abs(row.q_num - ref.q_num) > tolerance:
                    problems.append(
                        f"row {row.index}: q_num = {row.q_num:.5f} differs from golden "
                        f"{ref.q_num:.5f} by more than {tolerance}"
                    )
        return problems


# --- 1D peaks ---

def _slice_arrays(slice_: SliceLike) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(slice_, MomentumSlice):
        return np.asarray(slice_.q, dtype=float), np.asarray(slice_.f, dtype=float)
    pairs = np.asarray(list(slice_), dtype=float)
    if pairs.size == 0:
        return np.empty(0), np.empty(0)
    return pairs[:, 0], pairs[:, 1]


def _parabolic_vertex(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Vertex of the parabola through three points (x may be non-uniform)."""
    x0 = x[1]
    a, b, c = np.polyfit(x - x0, y, 2)
    if a >= 0.0:
        return float(x0), float(y[1])
    xv = -0.5 * b / a
    return float(x0 + xv), float(a * xv * xv + b * xv + c)


def find_peaks(
    slice_: SliceLike, min_prominence_frac: float = DEFAULT_MIN_PROMINENCE_FRAC
) -> List[Peak]:
    """
    Interior local maxima of a slice, refined by 3-point quadratic interpolation.

    Args:
        slice_: MomentumSlice or a sequence of (q, f) sorted ascending in q
        min_prominence_frac: Minimum prominence as a fraction of max(f)

    Returns:
        Peaks sorted ascending in q

    Raises:
        EmptySliceError: Fewer than 5 samples
    """
    q, f = _slice_arrays(slice_)
    if q.size < 5:
        raise EmptySliceError(f"peak finding needs at least 5 samples, got {q.size}")
    f_max = float(np.max(f))
    if f_max <= 0.0:
        return []
    indices, props = _scipy_find_peaks(f, prominence=min_prominence_frac * f_max)
    peaks = []
    for idx, prominence in zip(indices, props["prominences"]):
        qv, fv = _parabolic_vertex(q[idx - 1: idx + 2], f[idx - 1: idx + 2])
        peaks.append(Peak(q=qv, f=fv, prominence=float(prominence)))
    return sorted(peaks, key=lambda p: p.q)


# --- Rings and harmonics ---

def profile_angles(n_samples: int = DEFAULT_PROFILE_SAMPLES) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_samples) / n_samples


def max_ring_radius(spec: SpectrumGrid) -> float:
    """Largest origin-centred circle that fits inside the grid."""
    g = spec.grid
    return min(g.qx_max, -g.qx_min, g.qy_max, -g.qy_min)


def _interpolator(spec: SpectrumGrid) -> RegularGridInterpolator:
    qx, qy = spec.axes()
    return RegularGridInterpolator((qx, qy), spec.values, method="linear")


def angular_profile(
    spec: SpectrumGrid, radius: float, n_samples: int = DEFAULT_PROFILE_SAMPLES
) -> np.ndarray:
    """
    Spectrum sampled on the circle |q| = radius by bilinear interpolation.

    Args:
        spec: 2D spectrum
        radius: Ring radius
        n_samples: Uniform azimuth samples on [0, 2 pi)

    Returns:
        f(phi_j) for phi_j = 2 pi j / n_samples

    Raises:
        RadiusOutsideGridError: The circle leaves the grid
    """
    if radius < 0.0 or radius > max_ring_radius(spec):
        raise RadiusOutsideGridError(
            f"radius {radius:.4g} outside grid (max {max_ring_radius(spec):.4g})"
        )
    phis = profile_angles(n_samples)
    points = np.column_stack([radius * np.cos(phis), radius * np.sin(phis)])
    return _interpolator(spec)(points)


def radial_profile(
    spec: SpectrumGrid, radii: np.ndarray, n_samples: int = 128
) -> np.ndarray:
    """Angle-averaged f on each radius."""
    interp = _interpolator(spec)
    phis = profile_angles(n_samples)
    out = np.empty(len(radii))
    for i, r in enumerate(radii):
        points = np.column_stack([r * np.cos(phis), r * np.sin(phis)])
        out[i] = float(np.mean(interp(points)))
    return out


def ring_support(
    spec: SpectrumGrid, frac: float = DEFAULT_SUPPORT_FRAC, n_radii: int = 240
) -> Tuple[float, float]:
    """
    Radial extent (q_in, q_out) where the angle-averaged f exceeds frac * its maximum.

    Raises:
        AnalysisError: The spectrum is zero everywhere
    """
    radii = np.linspace(0.0, max_ring_radius(spec), n_radii)
    profile = radial_profile(spec, radii)
    peak = float(np.max(profile))
    if peak <= 0.0:
        raise AnalysisError("spectrum has no support (f <= 0 everywhere)")
    inside = np.nonzero(profile > frac * peak)[0]
    return float(radii[inside[0]]), float(radii[inside[-1]])


def default_radii(spec: SpectrumGrid, n: int = DEFAULT_N_RADII) -> List[float]:
    """n radii evenly spaced strictly inside the ring support."""
    q_in, q_out = ring_support(spec)
    return [float(r) for r in np.linspace(q_in, q_out, n + 2)[1:-1]]


def harmonic_spectrum(profile: np.ndarray, max_harmonic: int = MAX_HARMONIC) -> np.ndarray:
    """Coefficients c_k = mean(f(phi) exp(-i k phi)) for k = 0..max_harmonic."""
    coeffs = np.fft.fft(profile) / len(profile)
    return coeffs[: max_harmonic + 1]


def _phase_step(spec: SpectrumGrid) -> float:
    qx, qy = spec.axes()
    return 0.5 * min(qx[1] - qx[0], qy[1] - qy[0])


def _phase_slope(
    spec: SpectrumGrid, radius: float, harmonic: int, n_samples: int
) -> float:
    """d(arg c_k)/dq at a radius, by a central difference one half grid cell wide."""
    h = _phase_step(spec)
    r_max = max_ring_radius(spec)
    lo, hi = max(radius - h, 0.0), min(radius + h, r_max)
    c_lo = harmonic_spectrum(angular_profile(spec, lo, n_samples), harmonic)[harmonic]
    c_hi = harmonic_spectrum(angular_profile(spec, hi, n_samples), harmonic)[harmonic]
    return float(np.angle(c_hi * np.conj(c_lo))) / (hi - lo)


def ring_harmonics(
    spec: SpectrumGrid,
    radii: Optional[Sequence[float]] = None,
    n_samples: int = DEFAULT_PROFILE_SAMPLES,
) -> RingHarmonics:
    """
    Angular harmonic analysis of a spectrum on several rings.

    Args:
        spec: 2D spectrum
        radii: At least 3 ring radii inside the support (default: default_radii)
        n_samples: Azimuth samples per ring

    Returns:
        RingHarmonics with the dominant harmonic and chirality
    """
    radii = list(radii) if radii is not None else default_radii(spec)
    if len(radii) < 3:
        raise AnalysisError(f"harmonic analysis needs at least 3 radii, got {len(radii)}")

    coeffs = np.array([harmonic_spectrum(angular_profile(spec, r, n_samples)) for r in radii])
    amplitudes = np.abs(coeffs)
    mean_amp = amplitudes.mean(axis=0)
    per_radius = [int(1 + np.argmax(row[1:])) for row in amplitudes]
    dominant = int(1 + np.argmax(mean_amp[1:]))
    others = np.delete(mean_amp[1:], dominant - 1)
    contrast = float(mean_amp[dominant] / others.max()) if others.max() > 0 else math.inf
    mean_coeffs = coeffs.mean(axis=0)
    harmonics = [
        Harmonic(index=k, real=float(c.real), imag=float(c.imag)) for k, c in enumerate(mean_coeffs)
    ]

    if mean_amp[dominant] < HARMONIC_DC_FRACTION * mean_amp[0]:
        return RingHarmonics(
            radii=radii, amplitudes=amplitudes.tolist(), dominant_per_radius=per_radius,
            dominant=0, contrast=contrast, phase_slopes=[], chirality="none",
            mean_harmonics=harmonics,
        )

    if any(k != dominant for k in per_radius):
        msg = f"dominant harmonic differs across radii: {per_radius}, using {dominant}"
        logger.warning(msg)
        warnings.warn(msg, HarmonicDisagreementWarning, stacklevel=2)

    slopes = [_phase_slope(spec, r, dominant, n_samples) for r in radii]
    signs = {int(np.sign(s)) for s in slopes}
    if len(signs) != 1 or 0 in signs:
        chirality: Chirality = "none"
    elif signs.pop() == CHIRALITY_SIGN:
        chirality = "counterclockwise"
    else:
        chirality = "clockwise"
    return RingHarmonics(
        radii=radii, amplitudes=amplitudes.tolist(), dominant_per_radius=per_radius,
        dominant=dominant, contrast=contrast, phase_slopes=slopes, chirality=chirality,
        mean_harmonics=harmonics,
    )


def arm_count_and_chirality(
    spec: SpectrumGrid,
    radii: Optional[Sequence[float]] = None,
    n_samples: int = DEFAULT_PROFILE_SAMPLES,
) -> Tuple[int, Chirality]:
    """Dominant angular harmonic (spiral arm count) and winding sense."""
    result = ring_harmonics(spec, radii, n_samples)
    return result.dominant, result.chirality


def measure_pitch(
    spec: SpectrumGrid, q: float, harmonic: int, n_samples: int = DEFAULT_PROFILE_SAMPLES
) -> float:
    """Fringe pitch |d phi/d q| at radius q, from the phase slope of harmonic k divided by k."""
    if harmonic <= 0:
        raise AnalysisError("pitch needs a non-zero harmonic (spiral fringes)")
    return abs(_phase_slope(spec, q, harmonic, n_samples)) / harmonic


def estimate_rotation(
    spec_a: SpectrumGrid,
    spec_b: SpectrumGrid,
    radius: Optional[float] = None,
    n_samples: int = DEFAULT_PROFILE_SAMPLES,
    symmetry: int = 1,
) -> float:
    """
    Rotation angle taking spectrum A onto spectrum B (positive = counterclockwise).

    Circular cross-correlation of the two angular profiles, refined by a
    quadratic fit around the best shift.

    Args:
        spec_a: Reference spectrum
        spec_b: Rotated spectrum on the same grid
        radius: Ring radius (default: maximum of A's angle-averaged profile)
        n_samples: Azimuth samples
        symmetry: Known rotational symmetry order of the pattern; the search is
            restricted to |angle| <= pi / symmetry

    Raises:
        FlatProfileError: Either profile has no angular structure
    """
    if spec_a.grid != spec_b.grid:
        raise AnalysisError("rotation needs both spectra on the same grid")
    if radius is None:
        radii = np.linspace(0.0, max_ring_radius(spec_a), 240)[1:]
        radius = float(radii[np.argmax(radial_profile(spec_a, radii))])

    a = angular_profile(spec_a, radius, n_samples)
    b = angular_profile(spec_b, radius, n_samples)
    a = a - a.mean()
    b = b - b.mean()
    scale = max(np.abs(spec_a.values).max(), np.abs(spec_b.values).max(), 1e-300)
    if a.std() <= 1e-9 * scale or b.std() <= 1e-9 * scale:
        raise FlatProfileError(f"angular profile at radius {radius:.4g} is flat")

    corr = np.fft.ifft(np.conj(np.fft.fft(a)) * np.fft.fft(b)).real
    shifts = np.arange(n_samples)
    wrapped = np.where(shifts > n_samples // 2, shifts - n_samples, shifts)
    allowed = np.abs(wrapped) <= n_samples / (2.0 * symmetry)
    best = int(np.argmax(np.where(allowed, corr, -np.inf)))

    c_m, c_0, c_p = corr[best - 1], corr[best], corr[(best + 1) % n_samples]
    denom = c_m - 2.0 * c_0 + c_p
    offset = 0.5 * (c_m - c_p) / denom if denom < 0.0 else 0.0
    angle = (wrapped[best] + offset) * 2.0 * np.pi / n_samples
    return float((angle + np.pi) % (2.0 * np.pi) - np.pi)


# --- Synthetic spectra and calibration ---

def synthetic_spectrum(
    p: SpiralPrediction,
    grid: Optional[GridSpec] = None,
    ring_center: float = 0.64,
    ring_width: float = 0.08,
    rotation: float = 0.0,
) -> SpectrumGrid:
    """
    Interference envelope times a Gaussian ring, as a SpectrumGrid.

    Args:
        p: Prediction parameters (delay, photon number, handedness)
        grid: Momentum grid
        ring_center: Radius of the Gaussian ring weight
        ring_width: Width of the ring weight
        rotation: Rotate the whole pattern counterclockwise by this angle
    """
    grid = grid or GridSpec()
    qx, qy = grid.axes()
    QX, QY = np.meshgrid(qx, qy, indexing="ij")
    q = np.hypot(QX, QY)
    phi = np.arctan2(QY, QX) - rotation
    weight = np.exp(-0.5 * ((q - ring_center) / ring_width) ** 2)
    cfg = FieldConfig(delta1=p.delta1, delta2=p.delta2, T_delay=p.T, amp2_scale=1.0)
    return SpectrumGrid(
        values=envelope(q, phi, p) * weight, grid=grid, cfg=cfg, solver=SolverSettings()
    )


def calibrate_chirality_sign(T: float = 100.0, ell: int = 4) -> int:
    """Phase-slope sign of a synthetic LRCP envelope, whose spiral is counterclockwise."""
    p = SpiralPrediction(T=T, ell=ell, delta1=1, delta2=-1)
    spec = synthetic_spectrum(p)
    radii = [0.58, 0.62, 0.66, 0.70]
    slopes = [_phase_slope(spec, r, 2 * ell, DEFAULT_PROFILE_SAMPLES) for r in radii]
    return int(np.sign(np.mean(slopes)))


# --- Full reports ---

def analyze_spectrum(
    spec: SpectrumGrid,
    radii: Optional[Sequence[float]] = None,
    n_samples: int = DEFAULT_PROFILE_SAMPLES,
    pitch_q: Optional[float] = 0.6,
    reference: Optional[SpectrumGrid] = None,
    symmetry: int = 1,
) -> AnalysisReport:
    """
    Ring support, arm count, chirality, pitch and (optionally) rotation of a spectrum.

    Args:
        spec: 2D spectrum to analyse
        radii: Ring radii (default: inside the ring support)
        n_samples: Azimuth samples per ring
        pitch_q: Radius for the pitch measurement (None to skip)
        reference: Spectrum to measure the rotation against
        symmetry: Rotational symmetry order passed to estimate_rotation
    """
    q_in, q_out = ring_support(spec)
    rings = ring_harmonics(spec, radii, n_samples)
    report = AnalysisReport(
        harmonics=rings.mean_harmonics,
        dominant_harmonic=rings.dominant,
        harmonic_contrast=rings.contrast,
        chirality=rings.chirality,
        q_in=q_in,
        q_out=q_out,
    )
    cfg = spec.cfg
    opposite = cfg.delta1 * cfg.delta2 == -1 and cfg.has_second_pulse
    if rings.dominant > 0 and pitch_q is not None and 0.0 < pitch_q < max_ring_radius(spec):
        report.pitch_q = pitch_q
        report.measured_pitch = measure_pitch(spec, pitch_q, rings.dominant, n_samples)
        if opposite:
            try:
                ell = photon_number_from_arms(rings.dominant, cfg.delta1, cfg.delta2)
            except PredictionError as exc:
                logger.warning("no photon number from %d arms: %s", rings.dominant, exc)
            else:
                report.photon_number = ell
                report.delay_estimate = estimate_delay(
                    report.measured_pitch, pitch_q, ell, cfg.delta1, cfg.delta2
                )
    if reference is not None:
        report.rotation_estimate = estimate_rotation(
            reference, spec, n_samples=n_samples, symmetry=symmetry
        )
    return report


def table1_from_slice(
    slice_: SliceLike,
    T: float,
    k_range: Tuple[int, int] = (TABLE1_K_MIN, TABLE1_K_MAX),
    min_prominence_frac: float = DEFAULT_MIN_PROMINENCE_FRAC,
) -> Table1Report:
    """
    Pair the peaks of a +qx slice with the Ramsey estimates for k in k_range.

    Raises:
        PeakCountMismatch: The number of peaks differs from the number of indices
    """
    peaks = find_peaks(slice_, min_prominence_frac)
    ks = list(range(k_range[0], k_range[1] + 1))
    if len(peaks) != len(ks):
        raise PeakCountMismatch(len(ks), [p.q for p in peaks])
    estimates = [(k, ramsey_peaks(T, k)) for k in ks]
    estimates = [(k, q) for k, q in estimates if q is not None]
    rows = []
    for i, peak in enumerate(peaks, start=1):
        k, q_eva = min(estimates, key=lambda item: abs(item[1] - peak.q))
        rows.append(Table1Row(index=i, k=k, q_num=peak.q, q_eva=q_eva, diff=q_eva - peak.q))
    return Table1Report(T=T, rows=rows)


def table1_report(
    cfg: FieldConfig,
    settings: Optional[SolverSettings] = None,
    slice_spec: Optional[SliceSpec] = None,
    k_range: Tuple[int, int] = (TABLE1_K_MIN, TABLE1_K_MAX),
    min_prominence_frac: float = DEFAULT_MIN_PROMINENCE_FRAC,
    jobs: int = 1,
    progress: bool = False,
) -> Table1Report:
    """
    Simulate the +qx slice of an equal-handedness pulse pair and compare its fringes.

    Args:
        cfg: LLCP/RRCP-like field with a positive delay
        settings: Solver settings
        slice_spec: The scan (default qx in [0.2, 0.95], 2000 points)
        k_range: Fringe indices expected in the scan
        min_prominence_frac: Peak prominence threshold
        jobs: Worker count
        progress: Show a progress bar
    """
    if cfg.delta1 != cfg.delta2 or not cfg.has_second_pulse or cfg.T_delay <= 0.0:
        raise PredictionError(
            "fringe comparison needs two pulses of equal handedness and a positive delay"
        )
    slice_spec = slice_spec or SliceSpec(
        axis="x", q_min=TABLE1_Q_MIN, q_max=TABLE1_Q_MAX, n=TABLE1_POINTS
    )
    slice_ = compute_slice_1d(cfg, slice_spec, settings, jobs=jobs, progress=progress)
    return table1_from_slice(slice_, cfg.T_delay, k_range, min_prominence_frac)


def load_golden_table1(path: Path = GOLDEN_TABLE1_PATH) -> List[Table1Row]:
    """Bundled Table-1 rows (columns i, k, q_x, q_eva, diff)."""
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=2, ndmin=2)
    return [
        Table1Row(index=int(i), k=int(k), q_num=float(qn), q_eva=float(qe), diff=float(d))
        for i, k, qn, qe, d in data
    ]


def format_table1(rows: Sequence[Table1Row]) -> str:
    """Table-1 layout: one labelled line per quantity, values to 5 decimals."""
    label_width = max(len(label) for label in TABLE1_ROW_LABELS.values())
    columns = {
        "index": [f"{row.index:>8d}" for row in rows],
        "q_num": [f"{row.q_num:8.5f}" for row in rows],
        "q_eva": [f"{row.q_eva:8.5f}" for row in rows],
        "diff": [f"{row.diff:8.5f}" for row in rows],
    }
    lines = []
    for key, label in TABLE1_ROW_LABELS.items():
        lines.append(f"{label:<{label_width}} |" + " ".join(columns[key]))
    return "\n".join(lines)


def format_report(report: AnalysisReport) -> str:
    """Human-readable summary of an AnalysisReport."""
    lines = []
    if report.q_in is not None:
        lines.append(
            f"ring support: q_in = {report.q_in:.5f}, q_out = {report.q_out:.5f}, "
            f"width = {report.radial_width:.5f}"
        )
    if report.harmonics:
        lines.append(f"dominant harmonic: {report.dominant_harmonic}")
        if report.harmonic_contrast is not None:
            lines.append(f"harmonic contrast: {report.harmonic_contrast:.3f}")
        lines.append(f"chirality: {report.chirality}")
    if report.measured_pitch is not None:
        lines.append(f"pitch |dphi/dq| at q = {report.pitch_q:.3f}: {report.measured_pitch:.5f}")
    if report.photon_number is not None:
        lines.append(f"photon number from arms: {report.photon_number}")
    if report.delay_estimate is not None:
        lines.append(f"delay estimated from pitch: {report.delay_estimate:.3f}")
    if report.rotation_estimate is not None:
        lines.append(f"rotation vs reference: {report.rotation_estimate:+.5f} rad")
    if report.peaks:
        lines.append(f"peaks ({len(report.peaks)}):")
        lines.extend(f"  q = {p.q:.5f}  f = {p.f:.5e}" for p in report.peaks)
    if report.table1_rows:
        lines.append(format_table1(report.table1_rows))
    return "\n".join(lines)
