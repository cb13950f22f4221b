"""Acceptance criteria, one test (or parametrized group) per criterion.

A PASS/FAIL line per test is printed in the terminal summary by conftest.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dressedlines import lindblad as lb
from dressedlines.analysis import (
    DISTANCE_CALIBRATION_PRESET,
    PeakSet,
    Spectrum,
    assign_ladder,
    delta_a,
    detect_peaks,
    mean_distance,
    rabi_from_bleach,
    resonance_match,
    scaling_fit,
)
from dressedlines.collective import (
    CollectiveModel,
    TCProblem,
    assess_coupling,
    collective_rabi,
    scaling_comparison,
    tc_bright_splitting,
)
from dressedlines.jc import rabi_doublet_lines
from dressedlines.mollow import MollowLadder, sideband_ladder
from dressedlines.resonator import ResonatorGeometry, interfacial_gap, mode_volume_cylinder, purcell_factor
from dressedlines.units import SpectralValue, cm1_to_nm, convert, energy_difference, nm_to_cm1

from conftest import gaussian_bands


# 1 ------------------------------------------------------------------------


def test_criterion_01_collective_rabi_table():
    got = [collective_rabi(CollectiveModel(n, 1372.0)).magnitude for n in (2, 3, 4)]
    assert got == pytest.approx([3880.6, 7129.1, 10976.0], abs=0.05)
    assert got == pytest.approx([3874, 7120, 10960], rel=5e-3)


# 2 ------------------------------------------------------------------------


def test_criterion_02_inner_doublet():
    blue, red = rabi_doublet_lines(26196.0, 1372.0)
    assert cm1_to_nm(blue) == pytest.approx(372.0, abs=0.3)
    assert cm1_to_nm(red) == pytest.approx(392.0, abs=0.3)


# 3 ------------------------------------------------------------------------


def test_criterion_03_sideband_ladder():
    rows = sideband_ladder(MollowLadder(nm_to_cm1(382), 1450.0, (1, 2, 3, 5)))
    red = [cm1_to_nm(r) for n, r, b in rows if n <= 3]
    assert red == pytest.approx([404.4, 429.6, 458.1], abs=0.05)
    assert red == pytest.approx([404, 430, 457], abs=1.5)
    blue5 = [cm1_to_nm(b) for n, r, b in rows if n == 5][0]
    assert blue5 == pytest.approx(299.2, abs=0.05)
    assert blue5 == pytest.approx(299, abs=1.0)


# 4 ------------------------------------------------------------------------


def test_criterion_04_coupling_regime():
    a = assess_coupling(9590.0, nm_to_cm1(382))
    assert 0.175 <= a.eta <= 0.19
    assert a.regime == "ultrastrong"
    ev = convert(SpectralValue(9590.0), "eV").magnitude
    assert ev == pytest.approx(1.19, abs=0.005)
    assert round(ev, 1) == 1.2


# 5 ------------------------------------------------------------------------


def test_criterion_05_resonator_chain():
    geom = ResonatorGeometry(0.25, 0.063)
    assert interfacial_gap(geom) == pytest.approx(0.124, abs=1e-12)
    v = mode_volume_cylinder(geom)
    assert 1.0e-3 <= v <= 2.0e-3
    fp = purcell_factor(SpectralValue(380.0, "nm"), 1.0, 7.0, v)
    assert 1e10 <= fp <= 1e11


# 6 ------------------------------------------------------------------------


def _bleach(p_plus_nm, p_minus_nm, dark_nm):
    lam = np.arange(300, 700, 0.1)
    ox = gaussian_bands(lam, [(nm_to_cm1(p_plus_nm), 250, 0.6), (nm_to_cm1(p_minus_nm), 250, 0.5)])
    neu = gaussian_bands(lam, [(nm_to_cm1(dark_nm), 250, 1.0)])
    return rabi_from_bleach(delta_a(Spectrum(lam, ox), Spectrum(lam, neu)), nm_to_cm1(dark_nm))


def test_criterion_06_delta_a_workflow():
    r1 = _bleach(376, 440, 398)
    assert r1.splitting == pytest.approx(3869, abs=5)
    assert cm1_to_nm(r1.center) == pytest.approx(405.5, abs=0.5)
    r2 = _bleach(442, 530, 482)
    assert r2.splitting == pytest.approx(3756, abs=20)
    m = resonance_match(nm_to_cm1(632), nm_to_cm1(522), omega_ref=r2.splitting)
    assert m.detuning == pytest.approx(3334, abs=1)
    assert m.classification == "far-off-resonant"


# 7 ------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_criterion_07_tavis_cummings_sqrt_n(n):
    g = 686.0
    s = tc_bright_splitting(TCProblem(n, 26178.0, 26178.0, g, n_max=n + 4)).magnitude
    assert s / (2 * g) == pytest.approx(np.sqrt(n), rel=1e-8)
    s2 = tc_bright_splitting(TCProblem(n, 26178.0, 26178.0, g, n_max=n + 6)).magnitude
    assert s2 == pytest.approx(s, rel=1e-12)


def test_criterion_07_comparison_table():
    rows = scaling_comparison(1372.0, omega_single=1372.0)
    last = rows[-1]
    assert last["N"] == 4
    assert last["tavis_cummings_cm1"] == pytest.approx(5488.0, rel=1e-8)
    assert last["n_sqrt_n_cm1"] == pytest.approx(10976.0, rel=1e-12)
    assert [r["scaling_ratio"] for r in rows] == pytest.approx([1, 2, 3, 4], rel=1e-8)


# 8 ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def strong():
    return lb.simulate_mollow(20.0, 1.0, n_grid=1201)


def test_criterion_08_mollow_peaks(strong):
    omega = strong.spectrum.omega
    step = omega[1] - omega[0]
    pos = sorted(p for p, _ in strong.peaks)
    assert len(pos) == 3
    assert pos == pytest.approx([-20.0, 0.0, 20.0], abs=step)
    heights = dict((round(p), h) for p, h in strong.peaks)
    ratio = heights[0] / (0.5 * (heights[-20] + heights[20]))
    assert ratio == pytest.approx(3.0, rel=0.10)


def test_criterion_08_bloch_population():
    for rabi, det in [(20.0, 0.0), (1.0, 0.0), (3.0, 2.0)]:
        ss = lb.steady_state(lb.driven_tls_problem(rabi, det, 1.0))
        ree = np.real(ss.expect(lb.SIGMA_PLUS @ lb.SIGMA_MINUS))
        assert ree == pytest.approx(rabi**2 / (1 + 2 * rabi**2 + 4 * det**2), abs=1e-10)


def test_criterion_08_g2_limits():
    p = lb.driven_tls_problem(20.0, 0.0, 1.0)
    tau = np.linspace(0, 40, 4001)
    g2 = lb.correlation_g2(p, tau)
    assert g2[0] < 1e-6
    assert g2[-1] == pytest.approx(1.0, abs=1e-4)


def test_criterion_08_two_emitters_reproduce_single():
    tau = np.linspace(0, 40, 1601)
    one = lb.correlation_g1(lb.driven_tls_problem(2.0, 0.5, 1.0), tau, incoherent=True)
    two = lb.correlation_g1(lb.two_emitter_problem(2.0, 0.5, 1.0, 0.0, 0.0), tau, incoherent=True)
    assert np.max(np.abs(two - 2 * one)) <= 1e-8 * np.max(np.abs(one))


# 9 ------------------------------------------------------------------------


def test_criterion_09_cube_root_ratio():
    for c in (0.0125, 0.1, 1.0):
        assert mean_distance(c).mean_distance / mean_distance(8 * c).mean_distance == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("c_mm,expected", [(0.1, 237), (0.05, 303), (0.025, 387), (0.0125, 492)])
def test_criterion_09_calibrated_distance(c_mm, expected):
    r = mean_distance(c_mm, DISTANCE_CALIBRATION_PRESET).mean_distance
    assert r == pytest.approx(expected, rel=0.03)


def test_criterion_09_scaling_law_ranking():
    c = np.array([0.0125, 0.025, 0.05, 0.1])
    data = np.column_stack([c, 3.0e4 * c**1.5 + 1372.0])
    right = scaling_fit(data, "csqrtc")
    wrong = scaling_fit(data, "sqrtc")
    assert right.r_squared == pytest.approx(1.0, abs=1e-12)
    assert right.r_squared > wrong.r_squared


# 10 -----------------------------------------------------------------------


def test_criterion_10_phase_offset():
    d = energy_difference(SpectralValue(417, "nm"), SpectralValue(430, "nm")).magnitude
    assert d == pytest.approx(725, abs=2)
    assert d == pytest.approx(1450 / 2, rel=0.01)


# 11 -----------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.floats(1e2, 1e5), st.sampled_from(["nm", "cm-1", "eV", "rad/s"]), st.sampled_from(["nm", "cm-1", "eV", "rad/s"]))
def test_criterion_11_unit_round_trip(x, a, b):
    assert convert(convert(SpectralValue(x, a), b), a).magnitude == pytest.approx(x, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 30), st.floats(-10, 10), st.floats(0.1, 5), st.integers(0, 2**31))
def test_criterion_11_density_matrix_bounds(rabi, det, gamma, seed):
    p = lb.driven_tls_problem(rabi, det, gamma)
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    for rho in lb.evolve(p, np.outer(psi, psi.conj()), np.linspace(0, 5 / gamma, 11)):
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(rho).min() >= -1e-10
        assert -1e-12 <= rho[1, 1].real <= 1 + 1e-12


def _ladder_spectrum():
    lam = np.arange(380, 480, 0.1)
    w0 = nm_to_cm1(382)
    return Spectrum(lam, gaussian_bands(lam, [(w0 - n * 1450, 200, 1.0 / n) for n in (1, 2, 3)])), w0


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-4, 1e4))
def test_criterion_11_rescaling_invariance(factor):
    s, w0 = _ladder_spectrum()
    ref = assign_ladder(detect_peaks(s), "mollow", w0)
    got = assign_ladder(detect_peaks(s.scaled(factor)), "mollow", w0)
    assert [(m.order, m.sign) for m in got.matches] == [(m.order, m.sign) for m in ref.matches]
    assert got.constant == pytest.approx(ref.constant, rel=1e-9)
    assert got.omega0 == pytest.approx(ref.omega0, rel=1e-12)


def test_criterion_11_assignment_determinism():
    peaks = PeakSet.from_positions([26196 + s * o / 2 for o in (1372, 4300, 7000, 9590) for s in (1, -1)])
    records = [assign_ladder(peaks, fam, 26196).as_record() for fam in ("rabi-nsqrtn", "rabi-tc", "mollow") for _ in range(3)]
    for i in range(0, 9, 3):
        assert records[i] == records[i + 1] == records[i + 2]
