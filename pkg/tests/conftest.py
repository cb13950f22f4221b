import numpy as np
import pytest

from dressedlines.analysis import Spectrum


def gaussian_bands(wavelength, bands):
    """Sum of Gaussians defined in wavenumber: bands = [(center_cm1, sigma_cm1, amplitude), ...]."""
    k = 1e7 / np.asarray(wavelength, dtype=float)
    y = np.zeros_like(k)
    for c, s, a in bands:
        y += a * np.exp(-0.5 * ((k - c) / s) ** 2)
    return y


@pytest.fixture
def make_spectrum():
    def make(bands, lo=300.0, hi=600.0, step=0.1, **meta):
        lam = np.arange(lo, hi + step / 2, step)
        return Spectrum(lam, gaussian_bands(lam, bands), **meta)

    return make


ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
