import numpy as np
import pytest

from src.common.field_model import FieldConfig
from src.common.pair_production.states import GridSpec, SolverSettings, SpectrumGrid


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow reproduction tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def strong_pulse() -> FieldConfig:
    """Short, near-critical left pulse: large occupations, few hundred steps per solve."""
    return FieldConfig(E0=1.0, omega=0.6, tau=3.0)


@pytest.fixture
def tight() -> SolverSettings:
    return SolverSettings(rel_tol=1e-11, abs_tol=1e-13)


def make_spectrum(fn, n: int = 201, q_max: float = 1.2) -> SpectrumGrid:
    """SpectrumGrid with values fn(q, phi) on a square polar-plane grid."""
    grid = GridSpec(qx_min=-q_max, qx_max=q_max, nx=n, qy_min=-q_max, qy_max=q_max, ny=n)
    qx, qy = grid.axes()
    QX, QY = np.meshgrid(qx, qy, indexing="ij")
    values = fn(np.hypot(QX, QY), np.arctan2(QY, QX))
    return SpectrumGrid(values=values, grid=grid, cfg=FieldConfig(), solver=SolverSettings())


@pytest.fixture
def spectrum_from():
    return make_spectrum
