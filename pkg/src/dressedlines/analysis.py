"""Analysis of measured spectra: loading, peak detection, ladder assignment and derived constants.

Positions are handled in wavenumbers throughout; only the raw samples are
stored on a wavelength axis.
"""
from __future__ import annotations

import io
import itertools
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from .collective import assess_coupling
from .errors import DomainError, NoFitError, SpectrumParseError
from .units import CONSTANTS, cm1_to_nm, nm_to_cm1

DEFAULT_TOLERANCE = 300.0  # cm^-1
MAX_ORDER = 6
MAX_PEAKS = 20
FAR_OFF_ASYMMETRY = 0.25  # |doublet centre - dark line| / splitting
# 237 A at 0.1 mM against the bare cube-root estimate of 255 A
DISTANCE_CALIBRATION_PRESET = 0.93


@dataclass(eq=False)
class Spectrum:
    wavelength: np.ndarray  # nm, strictly increasing
    intensity: np.ndarray
    label: str = ""
    excitation_nm: float | None = None
    concentration_mm: float | None = None

    def __post_init__(self):
        self.wavelength = np.asarray(self.wavelength, dtype=float)
        self.intensity = np.asarray(self.intensity, dtype=float)
        if self.wavelength.shape != self.intensity.shape or self.wavelength.ndim != 1:
            raise DomainError("wavelength and intensity must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.wavelength)) and np.all(np.isfinite(self.intensity))):
            raise DomainError("spectrum contains non-finite samples")
        if np.any(self.wavelength <= 0):
            raise DomainError("wavelengths must be positive")
        if np.any(np.diff(self.wavelength) <= 0):
            raise DomainError("wavelengths must be strictly increasing")

    @property
    def wavenumber(self) -> np.ndarray:
        return 1e7 / self.wavelength

    def scaled(self, factor: float) -> "Spectrum":
        return Spectrum(self.wavelength, self.intensity * factor, self.label, self.excitation_nm, self.concentration_mm)


def _is_number(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def load_spectrum(source, label: str = "", **metadata) -> Spectrum:
    """Read a two-column ``wavelength_nm,intensity`` file, path, or text.

    '#' starts a comment. A first non-comment row whose fields are not both
    numeric is taken as a header. Unsorted rows are reordered and duplicate
    wavelengths averaged, each with a warning.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        path = Path(source)
        text = path.read_text()
        label = label or path.stem
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    rows = []
    header_allowed = True
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise SpectrumParseError(f"expected 2 comma-separated fields, got {len(fields)}", lineno)
        if header_allowed and not any(_is_number(f) for f in fields):
            header_allowed = False
            continue
        header_allowed = False
        try:
            lam, y = float(fields[0]), float(fields[1])
        except ValueError:
            raise SpectrumParseError(f"non-numeric field in {line!r}", lineno) from None
        if not (math.isfinite(lam) and math.isfinite(y)):
            raise SpectrumParseError("non-finite value", lineno)
        rows.append((lam, y))
    if not rows:
        raise SpectrumParseError("no data rows")
    data = np.array(rows)
    lam, y = data[:, 0], data[:, 1]
    if np.any(np.diff(lam) < 0):
        warnings.warn("wavelengths not monotone; samples reordered", stacklevel=2)
        order = np.argsort(lam, kind="stable")
        lam, y = lam[order], y[order]
    uniq, inverse, counts = np.unique(lam, return_inverse=True, return_counts=True)
    if np.any(counts > 1):
        warnings.warn("duplicate wavelengths averaged", stacklevel=2)
        y = np.bincount(inverse, weights=y) / counts
        lam = uniq
    return Spectrum(lam, y, label=label, **metadata)


@dataclass(frozen=True)
class Peak:
    position: float  # cm^-1
    height: float
    prominence: float

    @property
    def nm(self) -> float:
        return cm1_to_nm(self.position)


@dataclass(frozen=True)
class PeakSet:
    peaks: tuple[Peak, ...] = ()

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.peaks])

    @classmethod
    def from_positions(cls, positions, unit="cm-1") -> "PeakSet":
        ks = [nm_to_cm1(x) if unit == "nm" else float(x) for x in positions]
        return cls(tuple(Peak(k, 1.0, 1.0) for k in sorted(ks)))


def _parabolic_vertex(x, y):
    """Vertex abscissa and ordinate of the parabola through three (possibly unevenly spaced) points."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    d = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / d
    if a >= 0:
        return x1, y1
    xv = -b / (2 * a)
    c = y1 - a * x1**2 - b * x1
    return xv, a * xv**2 + b * xv + c


def detect_peaks(s: Spectrum, min_prominence: float = 0.05) -> PeakSet:
    """Local maxima with prominence >= ``min_prominence`` x max intensity.

    Positions are refined by a three-point parabola in wavenumber space.
    """
    if s.wavelength.size < 3:
        raise DomainError("peak detection needs at least 3 samples")
    y = s.intensity
    ymax = y.max()
    if ymax <= 0:
        return PeakSet()
    idx, props = find_peaks(y, prominence=min_prominence * ymax)
    k = s.wavenumber
    peaks = []
    for i, prom in zip(idx, props["prominences"]):
        pos, height = _parabolic_vertex(k[i - 1 : i + 2], y[i - 1 : i + 2])
        peaks.append(Peak(float(pos), float(height), float(prom)))
    peaks.sort(key=lambda p: p.position)
    return PeakSet(tuple(peaks))


# line ladder families: position = omega0 + sign * coefficient(order) * constant
FAMILIES = {
    "rabi-nsqrtn": (lambda n: n**1.5 / 2, 1),
    "rabi-tc": (lambda n: math.sqrt(n) / 2, 1),
    "mollow": (lambda n: float(n), 0),
}


@dataclass(frozen=True)
class Match:
    peak: float  # cm^-1
    order: int
    sign: int  # +1 blue, -1 red, 0 centre
    predicted: float
    residual: float

    def as_dict(self):
        return {
            "peak_cm1": self.peak,
            "peak_nm": cm1_to_nm(self.peak),
            "order": self.order,
            "side": {1: "blue", -1: "red", 0: "center"}[self.sign],
            "predicted_cm1": self.predicted,
            "residual_cm1": self.residual,
        }


@dataclass
class Assignment:
    family: str
    omega0: float
    constant: float  # Omega0 (Rabi families) or sideband spacing (Mollow)
    omega0_err: float
    constant_err: float
    matches: list[Match]
    unmatched: list[float]
    rms_residual: float
    rms_before_refit: float

    def as_record(self) -> dict:
        split = self.constant if self.family != "mollow" else 2 * self.constant
        a = assess_coupling(split, self.omega0) if split > 0 and self.omega0 > 0 else None
        return {
            "model": self.family,
            "omega0_cm1": self.omega0,
            "omega0_nm": cm1_to_nm(self.omega0),
            "coupling_cm1": self.constant,
            "coupling_err_cm1": self.constant_err,
            "eta": a.eta if a else None,
            "regime": a.regime if a else None,
            "matches": [m.as_dict() for m in self.matches],
            "unmatched_cm1": list(self.unmatched),
            "rms_residual_cm1": self.rms_residual,
        }


def _match_lines(positions, omega0, constant, coeff, min_order, tol, span):
    """Nearest-line matching, each predicted line used at most once; returns (matches, missing)."""
    lines = []
    for n in range(min_order, MAX_ORDER + 1):
        for sign in ((0,) if n == 0 else (1, -1)):
            lines.append((omega0 + sign * coeff(n) * constant, n, sign))
    candidates = []
    for i, x in enumerate(positions):
        for j, (lv, n, sign) in enumerate(lines):
            r = x - lv
            if abs(r) <= tol:
                candidates.append((abs(r), i, j))
    candidates.sort()
    used_p, used_l, matches = set(), set(), []
    for _, i, j in candidates:
        if i in used_p or j in used_l:
            continue
        used_p.add(i)
        used_l.add(j)
        lv, n, sign = lines[j]
        matches.append(Match(positions[i], n, sign, float(lv), positions[i] - lv))
    lo, hi = span
    top = max((m.order for m in matches), default=0)
    missing = sum(
        1 for j, (lv, n, _) in enumerate(lines) if j not in used_l and n <= top and lo - tol <= lv <= hi + tol
    )
    matches.sort(key=lambda m: m.peak)
    return matches, missing


def _min_line_gap(coeff, min_order):
    """Smallest separation between distinct ladder lines for unit constant."""
    offs = sorted({s * coeff(n) for n in range(min_order, MAX_ORDER + 1) for s in (-1, 1)})
    return min(b - a for a, b in zip(offs, offs[1:]))


def _rms(matches):
    return math.sqrt(sum(m.residual**2 for m in matches) / len(matches)) if matches else math.inf


def assign_ladder(
    peaks: PeakSet, family: str, omega0_hint: float, tolerance: float = DEFAULT_TOLERANCE
) -> Assignment:
    """Assign peaks to a line ladder and refit (omega0, constant) by least squares.

    Every (peak, order, side) triple defines a candidate ladder constant; each
    candidate whose closest pair of ladder lines is no wider than the
    tolerance is skipped. The rest are scored by lines matched (more is better), ladder lines
    missing inside the observed range (fewer is better), rms residual, and
    finally the larger constant. Enumeration is exhaustive over orders <= 6.
    """
    if family not in FAMILIES:
        raise DomainError(f"unknown ladder family {family!r}; expected one of {sorted(FAMILIES)}")
    coeff, min_order = FAMILIES[family]
    positions = sorted(float(p.position) for p in peaks)
    if len(positions) > MAX_PEAKS:
        raise DomainError(f"at most {MAX_PEAKS} peaks supported, got {len(positions)}")
    if len(positions) < 2:
        raise NoFitError("ladder assignment needs at least two peaks")
    span = (positions[0], positions[-1])

    best, best_key = None, None
    for x, n in itertools.product(positions, range(max(1, min_order), MAX_ORDER + 1)):
        constant = abs(x - omega0_hint) / coeff(n)
        if _min_line_gap(coeff, min_order) * constant <= tolerance:
            continue
        matches, missing = _match_lines(positions, omega0_hint, constant, coeff, min_order, tolerance, span)
        key = (-len(matches), missing, round(_rms(matches), 9), -constant)
        if best_key is None or key < best_key:
            best, best_key = (constant, matches), key
    if best is None:
        raise NoFitError("no candidate ladder constant: all peaks sit on the hint line")
    constant, matches = best
    rows = [(m.peak, 1.0, m.sign * coeff(m.order)) for m in matches]
    design = np.array([[r[1], r[2]] for r in rows])
    if len(matches) < 2 or np.linalg.matrix_rank(design) < 2:
        raise NoFitError(
            f"assignment underdetermined: {len(matches)} matched line(s) do not fix both centre and coupling",
            best=matches,
        )
    y = np.array([r[0] for r in rows])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    w0, const = float(sol[0]), float(sol[1])
    if const <= 0:
        raise NoFitError("refit produced a non-positive coupling", best=matches)
    resid = y - design @ sol
    dof = len(y) - 2
    if dof > 0:
        cov = np.linalg.inv(design.T @ design) * float(resid @ resid) / dof
        errs = np.sqrt(np.clip(np.diag(cov), 0, None))
    else:
        errs = np.zeros(2)
    refit = [Match(m.peak, m.order, m.sign, float(m.peak - r), float(r)) for m, r in zip(matches, resid)]
    matched = {m.peak for m in matches}
    return Assignment(
        family=family,
        omega0=w0,
        constant=const,
        omega0_err=float(errs[0]),
        constant_err=float(errs[1]),
        matches=refit,
        unmatched=[x for x in positions if x not in matched],
        rms_residual=_rms(refit),
        rms_before_refit=_rms(matches),
    )


@dataclass(frozen=True)
class LadderRow:
    order: int
    measured: float  # doublet separation, cm^-1
    predicted: float  # N^(3/2) x single-emitter splitting
    deviation_pct: float
    p_plus: float
    p_minus: float


@dataclass
class CollectiveTable:
    rows: list[LadderRow]
    flagged: list[tuple[float, float]] = field(default_factory=list)  # asymmetric pairs (P+, P-)
    unpaired: list[float] = field(default_factory=list)


def extract_collective_ladder(
    peaks: PeakSet, omega0: float, tolerance: float = DEFAULT_TOLERANCE, omega_single: float | None = None
) -> CollectiveTable:
    """Pair peaks into doublets about omega0 and compare separations with N^(3/2) Omega0.

    Pairs are taken greedily by increasing asymmetry |midpoint - omega0|;
    pairs beyond ``tolerance`` are flagged and excluded. Doublets are ordered
    by separation and labeled N = 1, 2, ...; Omega0 is the N = 1 separation
    unless ``omega_single`` is given.
    """
    pos = sorted(p.position for p in peaks)
    upper = [x for x in pos if x > omega0]
    lower = [x for x in pos if x < omega0]
    pairs = sorted(((abs((u + l) / 2 - omega0), u, l) for u in upper for l in lower))
    used, accepted, flagged = set(), [], []
    for asym, u, l in pairs:
        if u in used or l in used:
            continue
        if asym > tolerance:
            continue
        used.update((u, l))
        accepted.append((u, l))
    leftovers = [x for x in pos if x not in used]
    # report the nearest-symmetric pairing among leftovers as flagged
    for asym, u, l in pairs:
        if u in leftovers and l in leftovers:
            flagged.append((u, l))
            leftovers.remove(u)
            leftovers.remove(l)
    accepted.sort(key=lambda ul: ul[0] - ul[1])
    if not accepted:
        return CollectiveTable([], flagged, leftovers)
    base = omega_single if omega_single is not None else accepted[0][0] - accepted[0][1]
    rows = []
    for n, (u, l) in enumerate(accepted, start=1):
        meas = u - l
        pred = n**1.5 * base
        rows.append(LadderRow(n, meas, pred, 100.0 * (meas / pred - 1.0), u, l))
    return CollectiveTable(rows, flagged, leftovers)


def _median_step(s: Spectrum):
    return float(np.median(np.diff(s.wavelength)))


def delta_a(oxidized: Spectrum, neutral: Spectrum) -> Spectrum:
    """Oxidized minus neutral absorbance on the coarser grid over the overlap range.

    The finer spectrum is linearly interpolated; no extrapolation.
    """
    lo = max(oxidized.wavelength[0], neutral.wavelength[0])
    hi = min(oxidized.wavelength[-1], neutral.wavelength[-1])
    if hi <= lo:
        raise DomainError("spectra do not overlap in wavelength")

    def inside(s):
        return s.wavelength[(s.wavelength >= lo) & (s.wavelength <= hi)]

    # grid choice must not depend on argument order
    cands = sorted((-_median_step(s), inside(s).size, tuple(inside(s))) for s in (oxidized, neutral))
    grid = np.array(cands[0][2])
    if grid.size < 2:
        raise DomainError("overlap holds fewer than two samples")
    diff = np.interp(grid, oxidized.wavelength, oxidized.intensity) - np.interp(
        grid, neutral.wavelength, neutral.intensity
    )
    return Spectrum(grid, diff, label="delta-A")


@dataclass(frozen=True)
class BleachResult:
    p_plus: float  # cm^-1
    p_minus: float
    splitting: float
    center: float
    dark_line: float
    asymmetry: float  # |center - dark| / splitting

    @property
    def classification(self) -> str:
        return "near-resonant" if self.asymmetry < FAR_OFF_ASYMMETRY else "far-off-resonant"

    def as_record(self) -> dict:
        return {
            "p_plus_cm1": self.p_plus,
            "p_plus_nm": cm1_to_nm(self.p_plus),
            "p_minus_cm1": self.p_minus,
            "p_minus_nm": cm1_to_nm(self.p_minus),
            "coupling_cm1": self.splitting,
            "center_cm1": self.center,
            "center_nm": cm1_to_nm(self.center),
            "dark_cm1": self.dark_line,
            "asymmetry": self.asymmetry,
            "classification": self.classification,
        }


def rabi_from_bleach(da: Spectrum, dark_line: float, min_prominence: float = 0.05) -> BleachResult:
    """Polariton pair as the nearest positive delta-A maxima on either side of a bleached line."""
    peaks = [p for p in detect_peaks(da, min_prominence) if p.height > 0]
    above = [p.position for p in peaks if p.position > dark_line]
    below = [p.position for p in peaks if p.position < dark_line]
    if not above or not below:
        raise NoFitError(f"no delta-A maxima flank the dark line at {dark_line:.1f} cm^-1", best=peaks)
    pp, pm = min(above), max(below)
    split = pp - pm
    center = 0.5 * (pp + pm)
    return BleachResult(pp, pm, split, center, dark_line, abs(center - dark_line) / split)


@dataclass(frozen=True)
class SolutionEnsemble:
    concentration_mm: float
    mean_distance: float  # angstrom
    calibration: float = 1.0


def mean_distance(concentration_mm: float, calibration: float = 1.0) -> SolutionEnsemble:
    """R = calibration x n^(-1/3), n the molecular number density; R in angstrom."""
    if concentration_mm <= 0:
        raise DomainError("concentration must be positive")
    if calibration <= 0:
        raise DomainError("calibration must be positive")
    n = concentration_mm * CONSTANTS["N_A"]  # 1 mM = 1 mol/m^3
    return SolutionEnsemble(concentration_mm, calibration * n ** (-1.0 / 3.0) * 1e10, calibration)


LAWS = {"sqrtc": 0.5, "csqrtc": 1.5}


@dataclass(frozen=True)
class ScalingFit:
    law: str
    slope: float
    intercept: float
    r_squared: float


def scaling_fit(data, law: str) -> ScalingFit:
    """Ordinary least squares of Omega against C^(1/2) or C^(3/2)."""
    if law not in LAWS:
        raise DomainError(f"unknown law {law!r}; expected sqrtc or csqrtc")
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise DomainError("scaling fit needs at least 3 (C, Omega) points")
    c, omega = arr[:, 0], arr[:, 1]
    if np.any(c < 0):
        raise DomainError("concentrations must be non-negative")
    x = c ** LAWS[law]
    if np.unique(x).size < 2:
        raise DomainError("degenerate abscissae: need at least two distinct concentrations")
    slope, intercept = np.polyfit(x, omega, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((omega - pred) ** 2))
    ss_tot = float(np.sum((omega - omega.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(law, float(slope), float(intercept), min(max(r2, 0.0), 1.0))


@dataclass(frozen=True)
class ResonanceMatch:
    detuning: float  # mode - transition, cm^-1
    classification: str


def resonance_match(transition: float, mode: float, omega_ref: float) -> ResonanceMatch:
    """Detuning of a field mode from a transition, both in cm^-1.

    Near-resonant when |detuning| < omega_ref / 2.
    """
    det = mode - transition
    cls = "near-resonant" if abs(det) < omega_ref / 2 else "far-off-resonant"
    return ResonanceMatch(det, cls)
