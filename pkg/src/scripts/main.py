"""
Pair Production Command-Line Tool

Runs DHW momentum sweeps, semiclassical predictions and spectrum analysis
from a key = value config file and writes CSV artifacts with the config
embedded in their headers.

Usage:
    uv run python src/scripts/main.py spectrum --config configs/lrcp_vortex.cfg --jobs 8
    uv run python src/scripts/main.py compare-table1 --config configs/fringe_table.cfg
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

# Add the src directory to the path to allow importing from common
sys.path.append(str(Path(__file__).parent.parent.parent))
from src.common.analysis import (
    AnalysisReport,
    analyze_spectrum,
    estimate_rotation,
    find_peaks,
    format_report,
    format_table1,
    load_golden_table1,
    table1_report,
)
from src.common.errors import (
    AcceptanceError,
    AnalysisError,
    ConfigError,
    PairVortexError,
    PeakCountMismatch,
    PredictionError,
)
from src.common.field_model import FieldConfig, handedness_label, keldysh_gamma
from src.common.pair_production.states import SpectrumGrid
from src.common.pair_production.sweep import (
    compute_slice_1d,
    compute_spectrum,
    density_2d,
    density_3d,
)
from src.common.run_config import RunConfig, apply_overrides, load_config
from src.common.semiclassical import (
    SpiralPrediction,
    arm_count,
    effective_mass,
    photon_number,
    ramsey_peaks,
    ring_radius,
    rotation_angle,
    spiral_curve,
    spiral_indices,
    spiral_pitch,
)
from src.common.spectrum_io import (
    read_slice,
    read_spectrum,
    write_fringes,
    write_report,
    write_scan_summary,
    write_slice,
    write_spectrum,
    write_spirals,
)
from src.utils.helpers import fmt, output_path, pair_parser, value_tag

logger = logging.getLogger("pair_production")


def _banner(stage: str) -> None:
    print(f"\n--- {stage} ---")


def _describe_field(cfg: FieldConfig) -> None:
    print(f"   Field: {handedness_label(cfg)}, E1 = {cfg.E1:.5g}, E2 = {cfg.E2:.5g}, "
          f"omega = {cfg.omega:g}, tau = {cfg.tau:g}, T = {cfg.T_delay:g}, "
          f"phi1 = {cfg.phi1:.5g}, phi2 = {cfg.phi2:.5g}")


def _spectrum_summary(spec: SpectrumGrid, pitch_q: Optional[float] = None) -> Dict[str, float]:
    """Density, ring support and (when structured) harmonic content of a spectrum."""
    summary = {
        "density": density_2d(spec),
        "q_in": math.nan,
        "q_out": math.nan,
        "dominant_harmonic": math.nan,
        "measured_pitch": math.nan,
    }
    try:
        report = analyze_spectrum(spec, pitch_q=pitch_q)
    except AnalysisError as e:
        logger.info("no ring analysis: %s", e)
        return summary
    summary["q_in"], summary["q_out"] = report.q_in, report.q_out
    summary["dominant_harmonic"] = report.dominant_harmonic
    if report.measured_pitch is not None:
        summary["measured_pitch"] = report.measured_pitch
    return summary


def _print_summary(summary: Dict[str, float]) -> None:
    print(f"   Density (2D): {summary['density']:.6e}")
    print(f"   Ring support: q_in = {fmt(summary['q_in'])}, q_out = {fmt(summary['q_out'])}")
    if not math.isnan(summary["dominant_harmonic"]):
        print(f"   Dominant harmonic: {int(summary['dominant_harmonic'])}")


# --- Commands ---

def cmd_spectrum(run: RunConfig, jobs: int) -> int:
    _banner("Computing Spectrum")
    _describe_field(run.field)
    spec = compute_spectrum(run.field, run.grid, run.solver, jobs=jobs, progress=True)
    path = write_spectrum(output_path(run.output.prefix, "spectrum"), spec, run)
    print(f"   Spectrum saved to: {path}")
    _print_summary(_spectrum_summary(spec))
    return 0


def cmd_slice(run: RunConfig, jobs: int) -> int:
    _banner("Computing Slice")
    _describe_field(run.field)
    slice_ = compute_slice_1d(run.field, run.slice, run.solver, jobs=jobs, progress=True)
    path = write_slice(output_path(run.output.prefix, "slice"), slice_, run)
    print(f"   Slice saved to: {path}")
    peaks = find_peaks(slice_, run.analysis.min_prominence)
    print(f"   Peaks found: {len(peaks)}")
    for peak in peaks:
        print(f"      q{run.slice.axis} = {peak.q:.5f}   f = {peak.f:.5e}")
    return 0


def cmd_density(run: RunConfig, jobs: int) -> int:
    _banner("Computing Density")
    _describe_field(run.field)
    if run.density.mode == "3d":
        value = density_3d(run.field, run.density.grid3d(), run.solver, jobs=jobs, progress=True)
        print(f"   Density (3D, {run.density.n}^3 grid): {value:.6e}")
        return 0
    spec = compute_spectrum(run.field, run.grid, run.solver, jobs=jobs, progress=True)
    path = write_spectrum(output_path(run.output.prefix, "spectrum"), spec, run)
    print(f"   Spectrum saved to: {path}")
    print(f"   Density (2D, {run.grid.nx}x{run.grid.ny} grid): {density_2d(spec):.6e}")
    return 0


def cmd_predict(run: RunConfig, jobs: int) -> int:
    _banner("Semiclassical Predictions")
    cfg = run.field
    opts = run.predict
    _describe_field(cfg)
    if cfg.E0 > 0.0:
        print(f"   Keldysh gamma: {keldysh_gamma(cfg):.4f}")
    m_star = effective_mass(cfg.E1, cfg.omega)
    ell = opts.ell or photon_number(cfg.omega, m_star)
    print(f"   Effective mass m* = {m_star:.5f}, photon number ell = {ell}, "
          f"ring radius = {fmt(ring_radius(ell, cfg.omega, m_star))}")
    rotation = rotation_angle(cfg.phi2 - cfg.phi1, cfg.delta2)
    print(f"   CEP rotation delta2*dphi/2 = {rotation:+.5f} rad")
    if cfg.T_delay <= 0.0:
        raise PredictionError("fringe and spiral predictions need field.T_delay > 0")
    try:
        p = SpiralPrediction(T=cfg.T_delay, ell=ell, delta1=cfg.delta1, delta2=cfg.delta2)
    except ValidationError as e:
        raise PredictionError(f"no fringe prediction for {handedness_label(cfg)}: {e}") from e

    fringes = [(k, ramsey_peaks(cfg.T_delay, k)) for k in range(opts.k_min, opts.k_max + 1)]
    fringes = [(k, q) for k, q in fringes if q is not None]
    path = write_fringes(output_path(run.output.prefix, "fringes"), fringes, run)
    print(f"   Ramsey fringes ({len(fringes)}) saved to: {path}")

    if opts.kprime_min is not None and opts.kprime_max is not None:
        kprimes = list(range(opts.kprime_min, opts.kprime_max + 1))
    else:
        kprimes = spiral_indices(p, opts.q_min, opts.q_max)
    phis = 2.0 * np.pi * np.arange(opts.n_phi) / opts.n_phi
    rows = []
    for kprime in kprimes:
        q = spiral_curve(kprime, p, phis)
        keep = np.isfinite(q) & (q >= opts.q_min) & (q <= opts.q_max)
        rows.extend((kprime, float(phi), float(r)) for phi, r in zip(phis[keep], q[keep]))
    path = write_spirals(output_path(run.output.prefix, "spirals"), rows, run)
    shape = "rings" if p.handedness_difference == 0 else f"{arm_count(p)}-start spirals"
    print(f"   Fringe curves ({shape}, {len(kprimes)} indices) saved to: {path}")
    if p.handedness_difference != 0:
        q = run.analysis.pitch_q
        print(f"   Spiral pitch |dphi/dq| at q = {q:g}: {spiral_pitch(q, p):.5f}")
    return 0


def cmd_analyze(run: RunConfig, jobs: int) -> int:
    _banner("Analyzing Results")
    opts = run.analysis
    report = AnalysisReport()
    spectrum_file = opts.spectrum or str(output_path(run.output.prefix, "spectrum"))
    if opts.slice is not None:
        slice_ = read_slice(Path(opts.slice))
        report.peaks = find_peaks(slice_, opts.min_prominence)
        print(f"   Slice {opts.slice}: {len(report.peaks)} peaks")
    if opts.spectrum is not None or opts.slice is None:
        spec = read_spectrum(Path(spectrum_file))
        reference = read_spectrum(Path(opts.reference)) if opts.reference else None
        print(f"   Spectrum: {spectrum_file}")
        _describe_field(spec.cfg)
        spectrum_report = analyze_spectrum(
            spec,
            radii=opts.radii or None,
            n_samples=opts.n_samples,
            pitch_q=opts.pitch_q,
            reference=reference,
            symmetry=opts.symmetry,
        )
        report = spectrum_report.model_copy(update={"peaks": report.peaks})
    print(format_report(report))
    for path in write_report(run.output.prefix, report):
        print(f"   Report saved to: {path}")
    return 0


def cmd_compare_table1(run: RunConfig, jobs: int) -> int:
    _banner("Comparing Fringe Table")
    _describe_field(run.field)
    try:
        table = table1_report(
            run.field,
            run.solver,
            slice_spec=run.slice,
            k_range=(run.table1.k_min, run.table1.k_max),
            min_prominence_frac=run.analysis.min_prominence,
            jobs=jobs,
            progress=True,
        )
    except PeakCountMismatch as e:
        raise AcceptanceError(f"fringe table check failed: {e}") from e
    print(format_table1(table.rows))
    write_report(run.output.prefix, AnalysisReport(table1_rows=table.rows))
    golden = load_golden_table1() if run.table1.golden else None
    failures = table.failures(golden)
    if failures:
        for problem in failures:
            print(f"   FAIL: {problem}")
        raise AcceptanceError(f"{len(failures)} fringe table check(s) failed")
    print("   All fringe table checks passed.")
    return 0


def cmd_scan(run: RunConfig, jobs: int) -> int:
    _banner(f"Starting Scan over {run.scan.parameter}")
    opts = run.scan
    if not opts.values:
        raise ConfigError("scan needs at least one value", key="scan.values")
    rows: List[List[float]] = []
    first: Optional[SpectrumGrid] = None
    for value in opts.values:
        cfg = FieldConfig.model_validate({**run.field.model_dump(), opts.parameter: value})
        _banner(f"Scan Node: {opts.parameter} = {value:g}")
        _describe_field(cfg)
        spec = compute_spectrum(cfg, run.grid, run.solver, jobs=jobs, progress=True)
        name = f"{opts.parameter}_{value_tag(value)}_spectrum"
        path = write_spectrum(output_path(run.output.prefix, name), spec, run)
        print(f"   Spectrum saved to: {path}")
        summary = _spectrum_summary(spec, pitch_q=run.analysis.pitch_q)
        _print_summary(summary)
        rotation = math.nan
        if opts.parameter == "phi2":
            if first is None:
                first = spec
            else:
                try:
                    rotation = estimate_rotation(first, spec, symmetry=run.analysis.symmetry)
                    print(f"   Rotation vs first value: {rotation:+.5f} rad")
                except AnalysisError as e:
                    logger.warning("no rotation for %s = %g: %s", opts.parameter, value, e)
        rows.append([value, summary["density"], summary["q_in"], summary["q_out"],
                     summary["dominant_harmonic"], summary["measured_pitch"], rotation])
    path = write_scan_summary(output_path(run.output.prefix, "scan"), rows, run)
    _banner("Scan Complete")
    print(f"   Summary saved to: {path}")
    densities = [row[1] for row in rows]
    if len(densities) > 1 and max(densities) > 0.0:
        spread = (max(densities) - min(densities)) / max(densities)
        print(f"   Density spread across scan: {spread:.3%}")
    return 0


COMMANDS: Dict[str, Callable[[RunConfig, int], int]] = {
    "spectrum": cmd_spectrum,
    "slice": cmd_slice,
    "density": cmd_density,
    "predict": cmd_predict,
    "analyze": cmd_analyze,
    "compare-table1": cmd_compare_table1,
    "scan": cmd_scan,
}


class CommandLineParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the configuration error code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ConfigError.exit_code, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path,
                        help="Config file (or a CSV written by this tool)")
    common.add_argument("--out", help="Output path prefix (overrides output.prefix)")
    common.add_argument("--jobs", type=int, default=-1, help="Worker processes (-1: all cores)")
    common.add_argument("--grid", type=pair_parser(int, "--grid"), metavar="NX,NY",
                        help="Grid size (overrides grid.nx, grid.ny)")
    common.add_argument("--tol", type=pair_parser(float, "--tol"), metavar="REL,ABS",
                        help="Solver tolerances (overrides solver.rel_tol, solver.abs_tol)")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = CommandLineParser(
        description="Simulate and analyse pair production in two time-delayed circular pulses."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "2D momentum spectrum in the polarization plane",
        "slice": "1D momentum scan along one axis",
        "density": "Pair number density (2D plane or 3D)",
        "predict": "Semiclassical fringe and spiral predictions",
        "analyze": "Peaks, arm count, chirality, pitch and rotation of saved results",
        "compare-table1": "Fringe peaks against the Ramsey formula and the bundled golden data",
        "scan": "Spectra over a list of delays or relative CEPs",
    }
    for name, text in helps.items():
        subparsers.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse command line arguments and run the requested command."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    try:
        run = apply_overrides(load_config(args.config), out=args.out, grid=args.grid, tol=args.tol)
        return COMMANDS[args.command](run, args.jobs)
    except PairVortexError as e:
        print(f"Error: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
