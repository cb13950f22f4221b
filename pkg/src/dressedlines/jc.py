"""Jaynes-Cummings dressed-state ladder (rotating-wave approximation).

Energies are measured with the emitter ground state and the field vacuum at
zero, so the uncoupled manifold with n excitations holds |n, g> at n*w_mode
and |n-1, e> at n*w_mode + detuning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class JCParameters:
    omega_mode: float  # cm^-1
    omega_atom: float  # cm^-1
    g: float  # cm^-1

    def __post_init__(self):
        if self.omega_mode <= 0 or self.omega_atom <= 0:
            raise DomainError("mode and atom frequencies must be positive")
        if self.g < 0:
            raise DomainError("coupling g must be non-negative")

    @property
    def detuning(self) -> float:
        return self.omega_atom - self.omega_mode


@dataclass(frozen=True)
class DressedDoublet:
    n: int
    e_plus: float
    e_minus: float
    splitting: float  # kept separately; e_plus - e_minus cancels badly at large n


def dressed_energies(p: JCParameters, n: int) -> DressedDoublet:
    if n < 1:
        raise DomainError(f"excitation number must be >= 1, got {n}")
    delta = p.detuning
    split = math.sqrt(delta**2 + 4 * p.g**2 * n)
    center = n * p.omega_mode + delta / 2
    return DressedDoublet(n, center + split / 2, center - split / 2, split)


def ladder(p: JCParameters, n_max: int) -> list[DressedDoublet]:
    return [dressed_energies(p, n) for n in range(1, n_max + 1)]


def rabi_doublet_lines(omega0: float, splitting: float) -> tuple[float, float]:
    """Upper and lower polariton lines omega0 +/- splitting/2, in cm^-1."""
    if splitting < 0:
        raise DomainError("splitting must be non-negative")
    return omega0 + splitting / 2, omega0 - splitting / 2
