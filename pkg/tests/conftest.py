import numpy as np
import pytest

from omprsim import _flood_py, _kernels
from omprsim.config import SimConfig
from omprsim.geometry import grid_positions, sample_links

KERNELS = {"python": _flood_py.flood}
try:
    from omprsim import _flood_core
except ImportError:  # extension not built
    pass
else:
    KERNELS["cython"] = _flood_core.flood


@pytest.fixture(params=sorted(KERNELS))
def kernel(request, monkeypatch):
    """Run the test once per available flood kernel."""
    monkeypatch.setattr(_kernels, "flood", KERNELS[request.param])
    return request.param


@pytest.fixture
def grid7():
    return sample_links(grid_positions(7), 1.5, 1.0, None)


@pytest.fixture
def baseline():
    return SimConfig()


def chain_positions(k, spacing=1.0):
    return np.column_stack([np.arange(k) * spacing, np.zeros(k)])


def star_positions(leaves, radius=0.9):
    ang = np.linspace(0, 2 * np.pi, leaves, endpoint=False)
    # adjacent leaves end up > 1 apart for leaves <= 5
    pts = np.column_stack([np.cos(ang), np.sin(ang)]) * radius + 2.0
    return np.vstack([[2.0, 2.0], pts])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
