import argparse
import math
from pathlib import Path
from typing import Callable, Optional, Tuple, TypeVar

T = TypeVar("T", int, float)


def pair_parser(kind: Callable[[str], T], name: str) -> Callable[[str], Tuple[T, T]]:
    """argparse type for 'A,B' values such as --grid 256,256 or --tol 1e-8,1e-10."""

    def parse(text: str) -> Tuple[T, T]:
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"{name} expects two comma-separated values")
        try:
            return kind(parts[0]), kind(parts[1])
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"{name}: {e}") from e

    return parse


def output_path(prefix: str, name: str, suffix: str = ".csv") -> Path:
    """<prefix>_<name><suffix>, e.g. out/lrcp_vortex_spectrum.csv."""
    return Path(f"{prefix}_{name}{suffix}")


def value_tag(value: float) -> str:
    """File-name friendly rendering of a scan value (100.0 -> 100, 1.5708 -> 1.5708)."""
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.6g}".replace(".", "p").replace("-", "m")


def fmt(value: Optional[float], digits: int = 5) -> str:
    """Fixed-point number for reports; 'n/a' for missing or nan values."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    return f"{value:.{digits}f}"
