"""Collective coupling of N emitters: the N^(3/2) line-position model and the Tavis-Cummings exact solution.

The N^(3/2) law has no underlying Hamiltonian here; it only predicts where
doublet lines sit. The Tavis-Cummings side is a genuine dense
diagonalization and scales as sqrt(N).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import CapacityError, DomainError
from .jc import rabi_doublet_lines
from .units import SpectralValue

MAX_TC_DIM = 4096
ULTRASTRONG_ETA = 0.1


@dataclass(frozen=True)
class CollectiveModel:
    n: int  # ensemble size
    omega_single: float  # single-emitter vacuum Rabi splitting, cm^-1
    omega0: float = 0.0  # bare resonance, cm^-1

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("ensemble size must be >= 1")
        if self.omega_single < 0:
            raise DomainError("single-emitter splitting must be non-negative")


def collective_rabi(m: CollectiveModel) -> SpectralValue:
    return SpectralValue(m.n**1.5 * m.omega_single, "cm-1")


def collective_doublet_ladder(m: CollectiveModel, n_max: int) -> list[tuple[int, float, float]]:
    """(N, P+, P-) for N = 1..n_max with lines at omega0 +/- N^(3/2) Omega0 / 2."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    rows = []
    for n in range(1, n_max + 1):
        split = collective_rabi(CollectiveModel(n, m.omega_single, m.omega0)).magnitude
        rows.append((n, *rabi_doublet_lines(m.omega0, split)))
    return rows


@dataclass(frozen=True)
class TCProblem:
    n: int
    omega_mode: float
    omega_atom: float
    g: float
    n_max: int | None = None  # photon truncation, defaults to n + 4

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need at least one emitter")
        if self.n_max is None:
            object.__setattr__(self, "n_max", self.n + 4)
        if self.n_max < self.n:
            raise DomainError(f"photon truncation {self.n_max} below emitter count {self.n}")
        if self.dim > MAX_TC_DIM:
            raise CapacityError(f"Hilbert dimension {self.dim} exceeds {MAX_TC_DIM}")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * 2**self.n


# emitter basis ordering is (g, e)
_SM = np.array([[0.0, 1.0], [0.0, 0.0]])
_SZ = np.diag([-1.0, 1.0])
_I2 = np.eye(2)


def _kron_all(ops):
    return reduce(np.kron, ops)


def _site(op, i, n):
    return _kron_all([op if k == i else _I2 for k in range(n)])


def tc_operators(p: TCProblem):
    """(a, [sigma_minus_i], excitation number) on photon (x) emitter_1 (x) ... (x) emitter_N."""
    nph = p.n_max + 1
    a1 = np.diag(np.sqrt(np.arange(1, nph)), k=1)
    ia = np.eye(2**p.n)
    a = np.kron(a1, ia)
    sms = [np.kron(np.eye(nph), _site(_SM, i, p.n)) for i in range(p.n)]
    number = a.T @ a + sum(s.T @ s for s in sms)
    return a, sms, number


def tc_hamiltonian(p: TCProblem) -> np.ndarray:
    """H = w_c a+a + (w_a/2) sum sz_i + g sum (a+ s-_i + a s+_i), in cm^-1."""
    a, sms, _ = tc_operators(p)
    nph = p.n_max + 1
    h = p.omega_mode * (a.T @ a)
    for i, sm in enumerate(sms):
        sz = np.kron(np.eye(nph), _site(_SZ, i, p.n))
        h = h + 0.5 * p.omega_atom * sz + p.g * (a.T @ sm + a @ sm.T)
    return h.astype(complex)


@dataclass(frozen=True)
class SingleExcitationSpectrum:
    bright: tuple[float, float]  # (lower, upper) polariton energies
    dark: tuple[float, ...]
    bright_weights: tuple[float, ...] = field(default=())

    @property
    def splitting(self) -> float:
        return self.bright[1] - self.bright[0]


def tc_single_excitation(p: TCProblem) -> SingleExcitationSpectrum:
    """Diagonalize the one-excitation block and split it into bright polaritons and dark states.

    The two bright eigenvectors are those with largest weight on
    span{|1,G>, |0,W>} where W is the symmetric single-excitation emitter state.
    """
    h = tc_hamiltonian(p)
    a, sms, number = tc_operators(p)
    if not np.allclose(h @ number, number @ h, atol=1e-10 * max(1.0, abs(h).max())):
        raise AssertionError("Hamiltonian does not conserve excitation number")
    idx = np.flatnonzero(np.isclose(np.diag(number), 1.0))
    block = h[np.ix_(idx, idx)]
    energies, vecs = np.linalg.eigh(block)

    ground = np.zeros(h.shape[0])
    ground[0] = 1.0  # |0, g...g>
    one_photon = a.T @ ground
    w_state = sum(sm.T @ ground for sm in sms) / np.sqrt(p.n)
    bright_basis = np.stack([one_photon[idx], w_state[idx]], axis=1)
    weights = np.sum(np.abs(bright_basis.T @ vecs) ** 2, axis=0)
    order = np.argsort(-weights, kind="stable")
    bright_idx = sorted(order[:2])
    dark_idx = sorted(order[2:])
    return SingleExcitationSpectrum(
        bright=(float(energies[bright_idx[0]]), float(energies[bright_idx[1]])),
        dark=tuple(float(energies[i]) for i in dark_idx),
        bright_weights=tuple(float(weights[i]) for i in bright_idx),
    )


def tc_bright_splitting(p: TCProblem) -> SpectralValue:
    return SpectralValue(tc_single_excitation(p).splitting, "cm-1")


@dataclass(frozen=True)
class CouplingAssessment:
    splitting: float  # measured Omega, cm^-1
    omega0: float
    eta: float
    regime: str  # "ultrastrong" or "weak-or-strong"


def assess_coupling(splitting: float, omega0: float) -> CouplingAssessment:
    """Normalized coupling eta = (Omega/2)/omega0; ultrastrong iff eta > 0.1."""
    if splitting <= 0 or omega0 <= 0:
        raise DomainError("splitting and resonance must be positive")
    eta = 0.5 * splitting / omega0
    regime = "ultrastrong" if eta > ULTRASTRONG_ETA else "weak-or-strong"
    return CouplingAssessment(splitting, omega0, eta, regime)


def scaling_comparison(
    g: float,
    omega_single: float | None = None,
    omega: float = 26178.0,
    n_values=(1, 2, 3, 4),
    n_max_extra: int = 4,
) -> list[dict]:
    """Tavis-Cummings bright splitting (coupling g) against the N^(3/2) model (single splitting omega_single).

    ``omega_single`` defaults to 2g, the Tavis-Cummings N = 1 splitting.
    ``scaling_ratio`` compares the two laws after normalizing each to its own
    N = 1 value and equals N exactly.
    """
    if omega_single is None:
        omega_single = 2 * g
    tc1 = 2 * g
    rows = []
    for n in n_values:
        tc = tc_bright_splitting(TCProblem(n, omega, omega, g, n_max=n + n_max_extra)).magnitude
        model = collective_rabi(CollectiveModel(n, omega_single)).magnitude
        rows.append(
            {
                "N": n,
                "tavis_cummings_cm1": tc,
                "n_sqrt_n_cm1": model,
                "scaling_ratio": (model / omega_single) / (tc / tc1),
            }
        )
    return rows
