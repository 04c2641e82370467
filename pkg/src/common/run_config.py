"""
Run configuration and the key = value config file format.

A config file is flat text: one ``section.key = value`` per line, ``#``
comments, blank lines ignored. Values may be numeric expressions built from
numbers, ``+ - * / **``, parentheses, ``pi`` and ``sqrt(...)``; list-valued
keys take comma-separated items. Any CSV written by the tool carries its
config as ``# key = value`` header lines and can be loaded the same way.
"""
import ast
import logging
import math
import operator
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.common.config import TABLE1_K_MAX, TABLE1_K_MIN
from src.common.constants import DEFAULT_MIN_PROMINENCE_FRAC, DEFAULT_PROFILE_SAMPLES
from src.common.errors import ConfigError
from src.common.field_model import FieldConfig
from src.common.pair_production.states import Grid3DSpec, GridSpec, SliceSpec, SolverSettings

logger = logging.getLogger(__name__)


# --- Command-specific sections ---

class DensityOptions(BaseModel):
    """Number-density command: 2D (polarization plane) or full 3D grid."""
    model_config = ConfigDict(frozen=True)

    mode: Literal["2d", "3d"] = "2d"
    q_min: float = -1.2
    q_max: float = 1.2
    n: int = Field(default=64, ge=2)

    def grid3d(self) -> Grid3DSpec:
        return Grid3DSpec(q_min=self.q_min, q_max=self.q_max, n=self.n)


class PredictOptions(BaseModel):
    """
    Index ranges and sampling of the semiclassical predictions.

    Attributes:
        k_min, k_max: Ramsey fringe indices
        kprime_min, kprime_max: Spiral indices (default: all spirals in [q_min, q_max])
        ell: Photon number (default: from the effective mass of pulse 1)
        n_phi: Azimuth samples per spiral curve
        q_min, q_max: Momentum window for index enumeration
    """
    model_config = ConfigDict(frozen=True)

    k_min: int = TABLE1_K_MIN
    k_max: int = TABLE1_K_MAX
    kprime_min: Optional[int] = None
    kprime_max: Optional[int] = None
    ell: Optional[int] = Field(default=None, ge=1)
    n_phi: int = Field(default=360, ge=2)
    q_min: float = 0.0
    q_max: float = 1.2


class AnalysisOptions(BaseModel):
    """
    Inputs and knobs of the analyze command.

    Attributes:
        spectrum: Spectrum CSV to analyse (default: <prefix>_spectrum.csv)
        reference: Spectrum CSV to measure the rotation against
        slice: Slice CSV to run peak finding on
        radii: Ring radii (default: spread over the ring support)
        n_samples: Azimuth samples per ring
        min_prominence: Peak prominence as a fraction of the maximum
        symmetry: Rotational symmetry order assumed by the rotation estimate
        pitch_q: Radius of the pitch measurement
    """
    model_config = ConfigDict(frozen=True)

    spectrum: Optional[str] = None
    reference: Optional[str] = None
    slice: Optional[str] = None
    radii: List[float] = []
    n_samples: int = Field(default=DEFAULT_PROFILE_SAMPLES, ge=8)
    min_prominence: float = Field(default=DEFAULT_MIN_PROMINENCE_FRAC, ge=0.0)
    symmetry: int = Field(default=1, ge=1)
    pitch_q: float = Field(default=0.6, gt=0.0)


class Table1Options(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_min: int = TABLE1_K_MIN
    k_max: int = TABLE1_K_MAX
    golden: bool = True


class ScanOptions(BaseModel):
    """Parameter scan: one spectrum per value of field.T_delay or field.phi2."""
    model_config = ConfigDict(frozen=True)

    parameter: Literal["T_delay", "phi2"] = "T_delay"
    values: List[float] = []


class OutputOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    prefix: str = "run"


class RunConfig(BaseModel):
    """
    Everything a command needs, loaded from one config file.

    Attributes:
        field: Two-pulse field
        grid: 2D momentum grid
        solver: Solver tolerances and limits
        slice: 1D scan
        density: Number-density options
        predict: Semiclassical prediction options
        analysis: Analysis options
        table1: Fringe comparison options
        scan: Parameter scan
        output: Output path prefix
    """
    model_config = ConfigDict(frozen=True)

    field: FieldConfig = FieldConfig()
    grid: GridSpec = GridSpec()
    solver: SolverSettings = SolverSettings()
    slice: SliceSpec = SliceSpec()
    density: DensityOptions = DensityOptions()
    predict: PredictOptions = PredictOptions()
    analysis: AnalysisOptions = AnalysisOptions()
    table1: Table1Options = Table1Options()
    scan: ScanOptions = ScanOptions()
    output: OutputOptions = OutputOptions()

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.predict.k_max < self.predict.k_min:
            raise ValueError("predict.k_max must not be below predict.k_min")
        if self.table1.k_max < self.table1.k_min:
            raise ValueError("table1.k_max must not be below table1.k_min")
        return self


SECTIONS = tuple(RunConfig.model_fields)
STRING_KEYS = {
    "slice.axis", "density.mode", "analysis.spectrum", "analysis.reference",
    "analysis.slice", "scan.parameter", "output.prefix",
}
LIST_KEYS = {"scan.values", "analysis.radii", "slice.fixed"}
AMPLITUDE_KEYS = ("E1", "E2")


# --- Value expressions ---

_BINARY_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY_OPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi}
_FUNCTIONS = {"sqrt": math.sqrt}


def _eval_node(node: ast.AST) -> float:
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY_OPS:
        return _BINARY_OPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY_OPS:
        return _UNARY_OPS[type(node.op)](_eval_node(node.operand))
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCTIONS
        and len(node.args) == 1
        and not node.keywords
    ):
        return _FUNCTIONS[node.func.id](_eval_node(node.args[0]))
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


def evaluate_expression(text: str) -> float:
    """
    Evaluate a numeric config expression such as ``0.1*sqrt(2)`` or ``pi/2``.

    Integers stay integers unless an operation produces a float.

    Raises:
        ValueError: The text is not a supported expression
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ValueError(f"cannot parse '{text}'") from e
    try:
        return _eval_node(tree)
    except (ZeroDivisionError, OverflowError) as e:
        raise ValueError(f"cannot evaluate '{text}': {e}") from e


def _parse_scalar(key: str, raw: str, line: int) -> Any:
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    if raw.lower() in ("none", ""):
        return None
    try:
        return evaluate_expression(raw)
    except ValueError as e:
        raise ConfigError(f"invalid value '{raw}': {e}", key=key, line=line) from e


def parse_value(key: str, raw: str, line: int = 0) -> Any:
    """Convert the text right of '=' into a Python value for the given dotted key."""
    raw = raw.strip()
    if key in STRING_KEYS:
        return raw or None
    if key in LIST_KEYS:
        return [_parse_scalar(key, item.strip(), line) for item in raw.split(",") if item.strip()]
    return _parse_scalar(key, raw, line)


# --- Parsing ---

def parse_lines(lines: Iterable[str], skip_sections: Tuple[str, ...] = ()) -> RunConfig:
    """
    Build a RunConfig from config-file lines.

    Args:
        lines: Raw lines (comments and blanks allowed)
        skip_sections: Sections to ignore silently (e.g. provenance headers)

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Syntax errors, unknown or duplicate keys, invalid values;
            carries the dotted key and 1-based line number
    """
    sections: Dict[str, Dict[str, Any]] = {}
    key_lines: Dict[str, int] = {}
    for lineno, text in enumerate(lines, start=1):
        content = text.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'key = value', got '{content}'", line=lineno)
        key, raw = (part.strip() for part in content.split("=", 1))
        section, _, name = key.partition(".")
        if section in skip_sections:
            continue
        if section not in SECTIONS or not name:
            raise ConfigError("unknown config key", key=key, line=lineno)
        if key in key_lines:
            raise ConfigError(f"duplicate key (first set on line {key_lines[key]})",
                              key=key, line=lineno)
        key_lines[key] = lineno
        sections.setdefault(section, {})[name] = parse_value(key, raw, lineno)

    for section, values in sections.items():
        model = RunConfig.model_fields[section].annotation
        for name in values:
            if section == "field" and name in AMPLITUDE_KEYS:
                continue
            if name not in model.model_fields:
                key = f"{section}.{name}"
                raise ConfigError("unknown config key", key=key, line=key_lines[key])

    if "field" in sections:
        sections["field"] = _build_field(sections["field"], key_lines)
    try:
        return RunConfig.model_validate(sections)
    except ValidationError as e:
        raise _config_error(e, key_lines) from e


def _build_field(values: Dict[str, Any], key_lines: Dict[str, int]) -> Any:
    """Resolve the E1/E2 amplitude path into a FieldConfig."""
    if not any(name in values for name in AMPLITUDE_KEYS):
        return values
    for name in ("E0", "amp2_scale"):
        if name in values:
            key = f"field.{name}"
            raise ConfigError("cannot be combined with field.E1/field.E2",
                              key=key, line=key_lines[key])
    rest = {k: v for k, v in values.items() if k not in AMPLITUDE_KEYS}
    try:
        return FieldConfig.from_amplitudes(
            E1=values.get("E1", 0.0), E2=values.get("E2", 0.0), **rest
        )
    except ValidationError as e:
        raise _config_error(e, key_lines, prefix=("field",)) from e
    except ConfigError as e:
        raise ConfigError(e.message, key=e.key, line=key_lines.get(e.key or "")) from e


def _config_error(
    error: ValidationError, key_lines: Dict[str, int], prefix: Tuple[str, ...] = ()
) -> ConfigError:
    first = error.errors()[0]
    loc = prefix + tuple(str(part) for part in first["loc"] if not isinstance(part, int))
    key = ".".join(loc) if loc else None
    line = key_lines.get(key) if key else None
    return ConfigError(first["msg"], key=key, line=line)


def header_lines(path: Path) -> List[str]:
    """The '# key = value' header of a CSV written by the tool, without the '#'."""
    lines = []
    with open(path, "r", encoding="utf-8") as f:
        for text in f:
            if not text.startswith("#"):
                break
            body = text[1:].strip()
            if "=" in body:
                lines.append(body)
    return lines


def load_config(path: Path) -> RunConfig:
    """
    Load a RunConfig from a config file or from the header of a tool-written CSV.

    Raises:
        ConfigError: The file is missing or invalid
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    logger.info("loading config from %s", path)
    if path.suffix == ".csv":
        return parse_lines(header_lines(path), skip_sections=("provenance",))
    with open(path, "r", encoding="utf-8") as f:
        return parse_lines(f.readlines())


def apply_overrides(
    run: RunConfig,
    out: Optional[str] = None,
    grid: Optional[Tuple[int, int]] = None,
    tol: Optional[Tuple[float, float]] = None,
) -> RunConfig:
    """Apply the command-line overrides (--out, --grid, --tol) on top of a loaded config."""
    data = run.model_dump()
    if out is not None:
        data["output"]["prefix"] = out
    if grid is not None:
        data["grid"]["nx"], data["grid"]["ny"] = grid
    if tol is not None:
        data["solver"]["rel_tol"], data["solver"]["abs_tol"] = tol
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise _config_error(e, {}) from e


# --- Serialization ---

def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


def dump_config(run: RunConfig) -> List[str]:
    """
    The complete config as 'section.key = value' lines.

    Floats are written with repr, which round-trips exactly, so parsing the
    lines back gives an identical RunConfig. The field is always written in
    the E0/amp2_scale form.
    """
    lines = []
    for section, values in run.model_dump().items():
        for name, value in values.items():
            if value is None:
                continue
            lines.append(f"{section}.{name} = {_format_value(value)}")
    return lines
