"""
CSV persistence for spectra, slices, predictions and reports.

Every CSV starts with the complete run config as '# key = value' lines plus
the code version, then a column header row, then data rows written with 17
significant digits. The timestamp lives in a '<file>.meta.json' sidecar only,
so re-running a config reproduces the CSV byte for byte.
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.common.analysis import AnalysisReport, format_report
from src.common.errors import ConfigError
from src.common.pair_production.states import MomentumSlice, Provenance, SpectrumGrid
from src.common.run_config import RunConfig, dump_config, header_lines, load_config

logger = logging.getLogger(__name__)

NUMBER_FORMAT = "%.17g"
SIDECAR_SUFFIX = ".meta.json"


class FileMetadata(BaseModel):
    """Contents of the JSON sidecar next to each CSV."""
    kind: str
    columns: List[str]
    config: Dict[str, str]
    provenance: Provenance


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + SIDECAR_SUFFIX)


def _config_dict(run: RunConfig) -> Dict[str, str]:
    return dict(tuple(part.strip() for part in line.split("=", 1)) for line in dump_config(run))


def write_table(
    path: Path,
    kind: str,
    columns: Sequence[str],
    data: np.ndarray,
    run: RunConfig,
    provenance: Optional[Provenance] = None,
) -> Path:
    """
    Write a CSV with the config header plus its JSON sidecar.

    Args:
        path: Output CSV path (parent directories are created)
        kind: Short description of the content (spectrum, slice, ...)
        columns: Column names
        data: Array of shape (n_rows, len(columns))
        run: Config embedded in the header
        provenance: Timestamp and version (default: now)

    Returns:
        The CSV path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    provenance = provenance or Provenance()
    data = np.asarray(data, dtype=float).reshape(-1, len(columns))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in dump_config(run):
            f.write(f"# {line}\n")
        f.write(f"# provenance.code_version = {provenance.code_version}\n")
        f.write(",".join(columns) + "\n")
        np.savetxt(f, data, fmt=NUMBER_FORMAT, delimiter=",")
    metadata = FileMetadata(
        kind=kind, columns=list(columns), config=_config_dict(run), provenance=provenance
    )
    sidecar_path(path).write_text(metadata.model_dump_json(indent=2), encoding="utf-8")
    logger.info("wrote %s (%d rows)", path, data.shape[0])
    return path


def read_table(path: Path) -> Dict[str, Any]:
    """
    Read a CSV written by write_table.

    Returns:
        Dict with 'run' (RunConfig), 'columns', 'data' (2D array) and
        'provenance' (from the sidecar when present, else the header version)
    """
    path = Path(path)
    run = load_config(path)
    n_header = 0
    code_version = None
    with open(path, "r", encoding="utf-8") as f:
        for text in f:
            n_header += 1
            if text.startswith("#"):
                if text[1:].strip().startswith("provenance.code_version"):
                    code_version = text.split("=", 1)[1].strip()
                continue
            columns = text.strip().split(",")
            break
        else:
            raise ConfigError(f"{path} has no column header")
    data = np.loadtxt(path, delimiter=",", skiprows=n_header, ndmin=2)
    if data.size == 0:
        data = np.empty((0, len(columns)))

    sidecar = sidecar_path(path)
    if sidecar.is_file():
        metadata = FileMetadata.model_validate_json(sidecar.read_text(encoding="utf-8"))
        provenance = metadata.provenance
    elif code_version is not None:
        provenance = Provenance(code_version=code_version)
    else:
        provenance = Provenance()
    return {"run": run, "columns": columns, "data": data, "provenance": provenance}


# --- Spectra and slices ---

def write_spectrum(path: Path, spec: SpectrumGrid, run: RunConfig) -> Path:
    """Spectrum CSV with columns qx, qy, f in row-major order (qx outer)."""
    qx, qy = spec.axes()
    QX, QY = np.meshgrid(qx, qy, indexing="ij")
    data = np.column_stack([QX.ravel(), QY.ravel(), spec.values.ravel()])
    run = run.model_copy(update={"field": spec.cfg, "grid": spec.grid, "solver": spec.solver})
    return write_table(path, "spectrum", ["qx", "qy", "f"], data, run, spec.provenance)


def read_spectrum(path: Path) -> SpectrumGrid:
    """
    Load a spectrum CSV back into a SpectrumGrid.

    Raises:
        ConfigError: The header or row count does not describe a spectrum
    """
    table = read_table(path)
    run: RunConfig = table["run"]
    if table["columns"] != ["qx", "qy", "f"]:
        raise ConfigError(f"{path} is not a spectrum file (columns {table['columns']})")
    data = table["data"]
    if data.shape[0] != run.grid.nx * run.grid.ny:
        raise ConfigError(
            f"{path} has {data.shape[0]} rows, grid expects {run.grid.nx * run.grid.ny}"
        )
    return SpectrumGrid(
        values=data[:, 2].reshape(run.grid.nx, run.grid.ny),
        grid=run.grid,
        cfg=run.field,
        solver=run.solver,
        provenance=table["provenance"],
    )


def write_slice(path: Path, slice_: MomentumSlice, run: RunConfig) -> Path:
    data = np.column_stack([slice_.q, slice_.f])
    run = run.model_copy(
        update={"field": slice_.cfg, "slice": slice_.spec, "solver": slice_.solver}
    )
    return write_table(path, "slice", ["q", "f"], data, run, slice_.provenance)


def read_slice(path: Path) -> MomentumSlice:
    table = read_table(path)
    run: RunConfig = table["run"]
    if table["columns"] != ["q", "f"]:
        raise ConfigError(f"{path} is not a slice file (columns {table['columns']})")
    data = table["data"]
    return MomentumSlice(
        q=data[:, 0], f=data[:, 1], spec=run.slice, cfg=run.field, solver=run.solver,
        provenance=table["provenance"],
    )


# --- Predictions, scans and reports ---

def write_fringes(path: Path, rows: Sequence[Sequence[float]], run: RunConfig) -> Path:
    """Ramsey fringe positions, columns k, q_eva."""
    return write_table(path, "fringes", ["k", "q_eva"], np.asarray(rows, dtype=float), run)


def write_spirals(path: Path, rows: Sequence[Sequence[float]], run: RunConfig) -> Path:
    """Spiral fringe curves, columns kprime, phi, q."""
    return write_table(path, "spirals", ["kprime", "phi", "q"], np.asarray(rows, dtype=float), run)


SCAN_COLUMNS = [
    "value", "density", "q_in", "q_out", "dominant_harmonic", "measured_pitch", "rotation",
]


def write_scan_summary(path: Path, rows: Sequence[Sequence[float]], run: RunConfig) -> Path:
    """One row per scan value; undefined quantities are written as nan."""
    return write_table(path, "scan", SCAN_COLUMNS, np.asarray(rows, dtype=float), run)


def write_report(prefix: str, report: AnalysisReport) -> List[Path]:
    """Write an AnalysisReport as <prefix>_report.json and <prefix>_report.txt."""
    json_path = Path(f"{prefix}_report.json")
    text_path = Path(f"{prefix}_report.txt")
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    text_path.write_text(format_report(report) + "\n", encoding="utf-8")
    logger.info("wrote %s and %s", json_path, text_path)
    return [json_path, text_path]


def config_from_output(path: Path) -> RunConfig:
    """RunConfig embedded in the header of a tool-written CSV."""
    lines = header_lines(Path(path))
    if not lines:
        raise ConfigError(f"{path} carries no embedded config")
    return load_config(Path(path))
