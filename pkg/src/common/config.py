# src/common/config.py

import math

CODE_VERSION = "0.1.0"

# Field defaults (natural units, m = e = 1)
DEFAULT_E0 = 0.1 * math.sqrt(2)
DEFAULT_OMEGA = 0.6
DEFAULT_TAU = 10.0
DEFAULT_PHI1 = 0.0

# Solver defaults
DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-10
DEFAULT_PAD = 8.0  # window padding in units of tau
DEFAULT_MAX_STEPS = 200_000
REFERENCE_PAD = 10.0  # lower limit of the reference vector potential, in units of tau

# Momentum grid defaults (polarization plane)
DEFAULT_Q_WINDOW = 1.2
DEFAULT_GRID_POINTS = 256
DEFAULT_GRID_3D_POINTS = 64

# Fringe table slice
TABLE1_Q_MIN = 0.2
TABLE1_Q_MAX = 0.95
TABLE1_POINTS = 2000
TABLE1_K_MIN = 33
TABLE1_K_MAX = 43
