import numpy as np
import pytest

from mirrorslit import Apparatus
from mirrorslit.wavemodel import fringe_spacing


@pytest.fixture
def app():
    """Standard bench apparatus (700 nm, 100 um slits, 10 cm throw, 5 m arms)."""
    return Apparatus()


@pytest.fixture
def f_s(app):
    return fringe_spacing(app)


@pytest.fixture
def scan_grid(f_s):
    return np.linspace(-3 * f_s, 3 * f_s, 41)


def pytest_runtest_logreport(report):
    """One PASS/FAIL line per acceptance criterion in the terminal output."""
    if "test_acceptance" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        print(f"[acceptance] {name}: {'PASS' if report.passed else 'FAIL'}")
