"""
Constants for the pair-production vortex analysis.

This module contains fixed thresholds and calibrations used across the
analysis code, plus the location and labels of the bundled golden data.
"""
from pathlib import Path
from typing import Dict

# Sign of d(arg c_k)/dq that marks a counterclockwise vortex. Calibrated once
# on a synthetic LRCP envelope (see analysis.calibrate_chirality_sign) and frozen.
CHIRALITY_SIGN: int = -1

# Peak finding
DEFAULT_MIN_PROMINENCE_FRAC: float = 1e-3

# Ring analysis
DEFAULT_PROFILE_SAMPLES: int = 256
DEFAULT_SUPPORT_FRAC: float = 1e-2
DEFAULT_N_RADII: int = 5
HARMONIC_DC_FRACTION: float = 0.05  # non-DC amplitudes below this fraction of DC mean "rings"
MAX_HARMONIC: int = 24
SUPPORT_BOUNDARY_FRAC: float = 1e-3  # boundary values above this fraction of max truncate support

# Numerical noise accepted on the occupation
OCCUPATION_TOLERANCE: float = 1e-8

# Acceptance tolerance against the golden peak positions
GOLDEN_TOLERANCE: float = 5e-3

GOLDEN_TABLE1_PATH: Path = Path(__file__).parent / "data" / "table1_golden.csv"

TABLE1_ROW_LABELS: Dict[str, str] = {
    "index": "i",
    "q_num": "q_x",
    "q_eva": "q_x^eva",
    "diff": "q_x^eva - q_x",
}
