"""
Exceptions and warnings raised by the simulator.

Every error carries an ``exit_code`` that the command-line front-end returns
to the shell: 1 for configuration problems, 2 for solver/computation
failures, 3 for acceptance-check failures.
"""
from typing import Optional, Sequence


class PairVortexError(Exception):
    """Base class for all errors raised by this package."""

    exit_code: int = 2


# --- Configuration ---

class ConfigError(PairVortexError):
    """Invalid or unparseable configuration.

    Attributes:
        key: Dotted config key the problem refers to, if known
        line: 1-based line number in the config file, if known
    """

    exit_code = 1

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.key = key
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")

    def __reduce__(self):
        return (type(self), (self.message, self.key, self.line))


class UndefinedParameterError(ConfigError):
    """A derived parameter is undefined for the given configuration."""


# --- Solver ---

class SolverError(PairVortexError):
    """The ODE integration for a momentum point failed."""

    exit_code = 2


class StepBudgetExceeded(SolverError):
    """The integrator used up its step budget before reaching the final time."""

    def __init__(self, t_reached: float, max_steps: int):
        self.t_reached = t_reached
        self.max_steps = max_steps
        super().__init__(f"step budget of {max_steps} exhausted at t = {t_reached:.6g}")

    def __reduce__(self):
        return (type(self), (self.t_reached, self.max_steps))


class IntegrationBlowup(SolverError):
    """The state became non-finite."""

    def __init__(self, t_reached: float, detail: str = "non-finite state"):
        self.t_reached = t_reached
        self.detail = detail
        super().__init__(f"{detail} at t = {t_reached:.6g}")

    def __reduce__(self):
        return (type(self), (self.t_reached, self.detail))


class SweepNodeError(SolverError):
    """A grid node failed; carries the momentum coordinates of the node."""

    def __init__(self, qx: float, qy: float, qz: float, cause: str):
        self.qx, self.qy, self.qz = qx, qy, qz
        self.cause = cause
        super().__init__(f"node q = ({qx:.6g}, {qy:.6g}, {qz:.6g}) failed: {cause}")

    def __reduce__(self):
        return (type(self), (self.qx, self.qy, self.qz, self.cause))


# --- Semiclassical predictions ---

class PredictionError(PairVortexError):
    """A semiclassical prediction was requested for unsuitable parameters."""

    exit_code = 1


class DegeneratePredictionError(PredictionError):
    """Spiral quantities need opposite handedness (delta1 != delta2)."""


# --- Analysis ---

class AnalysisError(PairVortexError):
    """Signature extraction from a spectrum failed."""

    exit_code = 2


class EmptySliceError(AnalysisError):
    """The slice is empty or too short for peak finding."""


class RadiusOutsideGridError(AnalysisError):
    """The requested ring does not fit inside the momentum grid."""


class FlatProfileError(AnalysisError):
    """An angular profile has no structure to correlate."""


class PeakCountMismatch(AnalysisError):
    """The number of detected fringe peaks differs from the expected one."""

    def __init__(self, expected: int, found: Sequence[float]):
        self.expected = expected
        self.found = list(found)
        listing = ", ".join(f"{q:.5f}" for q in self.found) or "none"
        super().__init__(f"expected {expected} peaks, found {len(self.found)}: {listing}")

    def __reduce__(self):
        return (type(self), (self.expected, self.found))


class AcceptanceError(PairVortexError):
    """A reproduction check against golden data failed."""

    exit_code = 3


# --- Warnings ---

class SupportTruncationWarning(UserWarning):
    """The momentum grid does not cover the support of the distribution."""


class HarmonicDisagreementWarning(UserWarning):
    """Rings at different radii report different dominant harmonics."""


class OccupationWarning(UserWarning):
    """A final occupation exceeded 1 (per-spin bound)."""
