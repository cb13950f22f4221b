"""Dense Lindblad master-equation solver for one or two driven two-level emitters.

Energies and rates are in cm^-1 and enter the master equation as angular
frequencies, so times are in units of 1/(2 pi c x 1 cm^-1), about 5.3 ps
(``TIME_UNIT_S``). Superoperators act on row-major vectorized density
matrices: vec(A rho B) = (A kron B^T) vec(rho).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DomainError, MultiplicityError
from .mollow import ModelSpectrum
from .units import RADS_PER_CM1

TIME_UNIT_S = 1.0 / RADS_PER_CM1
HERMITIAN_TOL = 1e-12
UNIQUENESS_TOL = 1e-8

# emitter basis ordering is (g, e)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T
IDENTITY2 = np.eye(2, dtype=complex)


class TruncationWarning(UserWarning):
    """A correlation function had not decayed by the end of its time grid."""


def dag(a):
    return a.conj().T


@dataclass(frozen=True, eq=False)
class LindbladProblem:
    hamiltonian: np.ndarray
    collapse_ops: tuple = ()  # ((operator, rate), ...)
    emission_op: np.ndarray | None = None  # lowering operator of the radiated field
    label: str = ""

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DomainError("Hamiltonian must be a square matrix")
        if not np.all(np.isfinite(h)):
            raise DomainError("Hamiltonian has non-finite entries")
        if np.abs(h - dag(h)).max() > HERMITIAN_TOL * max(1.0, np.abs(h).max()):
            raise DomainError("Hamiltonian is not Hermitian")
        ops = []
        for op, rate in self.collapse_ops:
            op = np.asarray(op, dtype=complex)
            if op.shape != h.shape:
                raise DomainError("collapse operator shape does not match the Hamiltonian")
            if rate < 0:
                raise DomainError(f"collapse rate must be non-negative, got {rate}")
            ops.append((op, float(rate)))
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "collapse_ops", tuple(ops))
        if self.emission_op is not None:
            object.__setattr__(self, "emission_op", np.asarray(self.emission_op, dtype=complex))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @cached_property
    def liouvillian(self) -> np.ndarray:
        return liouvillian(self.hamiltonian, self.collapse_ops)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    rho: np.ndarray

    @property
    def trace(self) -> complex:
        return np.trace(self.rho)

    def expect(self, op) -> complex:
        return np.trace(op @ self.rho)

    def check(self, trace_tol=1e-9, herm_tol=1e-12, pos_tol=-1e-10) -> None:
        if abs(self.trace - 1) > trace_tol:
            raise AssertionError(f"trace {self.trace} deviates from 1")
        if np.abs(self.rho - dag(self.rho)).max() > herm_tol:
            raise AssertionError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(0.5 * (self.rho + dag(self.rho))).min() < pos_tol:
            raise AssertionError("density matrix has a negative eigenvalue")


def liouvillian(h, collapse_ops) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for c, rate in collapse_ops:
        cdc = dag(c) @ c
        lv += rate * (np.kron(c, c.conj()) - 0.5 * np.kron(cdc, eye) - 0.5 * np.kron(eye, cdc.T))
    return lv


def _vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1)


def _unvec(v, d):
    return v.reshape(d, d)


def driven_tls_problem(rabi: float, detuning: float, gamma: float) -> LindbladProblem:
    """Resonance fluorescence of a driven two-level emitter in the drive frame.

    H = -detuning s+s- + (rabi/2)(s+ + s-), collapse sqrt(gamma) s-,
    detuning = omega_L - omega0.
    """
    if gamma <= 0:
        raise DomainError("decay rate gamma must be positive")
    h = -detuning * SIGMA_PLUS @ SIGMA_MINUS + 0.5 * rabi * (SIGMA_PLUS + SIGMA_MINUS)
    return LindbladProblem(h, ((SIGMA_MINUS, gamma),), SIGMA_MINUS, label="driven-tls")


def two_emitter_problem(
    rabi: float, detuning: float, gamma: float, dipole_coupling: float = 0.0, cross_decay: float = 0.0
) -> LindbladProblem:
    """Two identical, equally driven emitters with coherent exchange and collective decay.

    The dissipator sum_ij G_ij (s-_i rho s+_j - {s+_j s-_i, rho}/2) with
    G = [[gamma, cross], [cross, gamma]] is written in its eigenbasis, the
    symmetric and antisymmetric lowering operators with rates gamma +/- cross.
    """
    if abs(cross_decay) > gamma:
        raise DomainError(f"|cross_decay| = {abs(cross_decay)} exceeds gamma = {gamma}: dissipator not positive")
    if gamma <= 0:
        raise DomainError("decay rate gamma must be positive")
    s1 = np.kron(SIGMA_MINUS, IDENTITY2)
    s2 = np.kron(IDENTITY2, SIGMA_MINUS)
    h = np.zeros((4, 4), dtype=complex)
    for s in (s1, s2):
        h += -detuning * dag(s) @ s + 0.5 * rabi * (s + dag(s))
    h += dipole_coupling * (dag(s1) @ s2 + dag(s2) @ s1)
    sym = (s1 + s2) / np.sqrt(2)
    anti = (s1 - s2) / np.sqrt(2)
    ops = ((sym, gamma + cross_decay), (anti, gamma - cross_decay))
    return LindbladProblem(h, ops, s1 + s2, label="two-emitter")


def steady_state(p: LindbladProblem) -> DensityMatrix:
    """Null vector of the Liouvillian, trace-normalized.

    Uniqueness requires the second-smallest singular value of L to exceed
    ``UNIQUENESS_TOL`` relative to the largest.
    """
    lv = p.liouvillian
    _, s, vh = np.linalg.svd(lv)
    if s[-2] <= UNIQUENESS_TOL * s[0]:
        raise MultiplicityError(f"Liouvillian null space is degenerate (second-smallest singular value {s[-2]:.3e})")
    rho = _unvec(vh[-1].conj(), p.dim)
    rho = rho / np.trace(rho)
    return DensityMatrix(0.5 * (rho + dag(rho)))


class _Propagator:
    """exp(L dt) cache keyed by step size."""

    def __init__(self, lv):
        self.lv = lv
        self._cache = {}

    def step(self, dt):
        key = round(float(dt), 12)
        if key not in self._cache:
            self._cache[key] = scipy.linalg.expm(self.lv * dt)
        return self._cache[key]

    def run(self, v0, times):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) < 0):
            raise DomainError("time grid must be non-negative and non-decreasing")
        out = np.empty((times.size, v0.size), dtype=complex)
        v = v0 if times[0] == 0 else self.step(times[0]) @ v0
        out[0] = v
        for k in range(1, times.size):
            v = self.step(times[k] - times[k - 1]) @ v
            out[k] = v
        return out


def evolve(p: LindbladProblem, rho0, times) -> np.ndarray:
    """Density matrices at ``times`` (array of shape (len(times), d, d))."""
    traj = _Propagator(p.liouvillian).run(_vec(rho0), times)
    return traj.reshape(-1, p.dim, p.dim)


def _emission(p):
    if p.emission_op is None:
        raise DomainError("problem has no emission operator")
    return p.emission_op


def _check_decay(values, floor, what):
    scale = abs(values[0])
    if scale > 0 and abs(values[-1]) > floor * scale:
        warnings.warn(f"{what} has not decayed below {floor:g} of its initial value; extend the time grid",
                      TruncationWarning, stacklevel=3)


def correlation_g1(
    p: LindbladProblem, tau, incoherent: bool = False, ss: DensityMatrix | None = None, state=None
) -> np.ndarray:
    """<a+(tau) a(0)> by the quantum regression theorem.

    The average is over the steady state unless an initial density matrix
    ``state`` is given. With ``incoherent`` the coherent part |<a>|^2 is
    subtracted.
    """
    a = _emission(p)
    if state is not None:
        ss = DensityMatrix(np.asarray(state, dtype=complex))
    ss = ss or steady_state(p)
    traj = _Propagator(p.liouvillian).run(_vec(a @ ss.rho), tau)
    g1 = traj @ _vec(dag(a).T)  # Tr[A X] = vec(A^T) . vec(X)
    coherent = abs(ss.expect(a)) ** 2
    _check_decay(g1 - coherent, 1e-6, "g1")
    return g1 - coherent if incoherent else g1


def spectrum_from_g1(g1, tau, omega_grid) -> ModelSpectrum:
    """S(w) = Re int_0^inf g1(tau) exp(-i w tau) dtau by trapezoidal quadrature.

    The exp(-i w tau) kernel places a line at +w when the field oscillates
    as exp(-i w t); ``omega_grid`` is offset from the frame frequency.
    """
    tau = np.asarray(tau, dtype=float)
    g1 = np.asarray(g1, dtype=complex)
    w = np.zeros_like(tau)
    dt = np.diff(tau)
    w[:-1] += dt / 2
    w[1:] += dt / 2
    omega = np.asarray(omega_grid, dtype=float)
    kernel = np.exp(-1j * np.outer(omega, tau))
    return ModelSpectrum(omega, np.real(kernel @ (w * g1)))


def emission_spectrum(p: LindbladProblem, omega_grid, tau, incoherent: bool = True) -> ModelSpectrum:
    return spectrum_from_g1(correlation_g1(p, tau, incoherent=incoherent), tau, omega_grid)


def correlation_g2(p: LindbladProblem, tau, ss: DensityMatrix | None = None) -> np.ndarray:
    """Normalized <a+ a+(tau) a(tau) a> / <a+ a>^2 via the regression theorem."""
    a = _emission(p)
    ss = ss or steady_state(p)
    n_op = dag(a) @ a
    norm = np.real(ss.expect(n_op))
    if norm <= 0:
        raise DomainError("steady-state emission intensity is zero; g2 undefined")
    traj = _Propagator(p.liouvillian).run(_vec(a @ ss.rho @ dag(a)), tau)
    g2 = np.real(traj @ _vec(n_op.T)) / norm**2
    _check_decay(g2 - 1.0, 1e-6, "g2 - 1")
    return g2


def find_spectral_peaks(spec: ModelSpectrum, min_prominence: float = 0.02) -> list[tuple[float, float]]:
    """(position, height) of local maxima with prominence above a fraction of the maximum."""
    from scipy.signal import find_peaks

    y = spec.intensity
    if y.size < 3 or y.max() <= 0:
        return []
    idx, _ = find_peaks(y, prominence=min_prominence * y.max())
    return [(float(spec.omega[i]), float(y[i])) for i in idx]


@dataclass
class MollowSimulation:
    spectrum: ModelSpectrum
    peaks: list = field(default_factory=list)
    excited_population: float = 0.0


def simulate_mollow(rabi, gamma, detuning=0.0, n_grid=1201, tmax=None, span=None, dt=None) -> MollowSimulation:
    """Incoherent resonance-fluorescence spectrum of a driven emitter on an offset grid."""
    p = driven_tls_problem(rabi, detuning, gamma)
    gbar = np.hypot(rabi, detuning)
    span = span or max(3 * gbar, 10 * gamma)
    tmax = tmax or 40.0 / gamma
    dt = dt or min(0.2 / max(span, gamma), 0.05 / gamma)
    tau = np.arange(0.0, tmax + dt / 2, dt)
    omega = np.linspace(-span, span, n_grid)
    ss = steady_state(p)
    spec = spectrum_from_g1(correlation_g1(p, tau, incoherent=True, ss=ss), tau, omega)
    pop = float(np.real(ss.expect(SIGMA_PLUS @ SIGMA_MINUS)))
    return MollowSimulation(spec, find_spectral_peaks(spec), pop)
