"""Mollow triplet line positions, sideband ladders and the strong-drive lineshape.

All quantities in cm^-1. The sideband spacing of a ladder is kept distinct
from any vacuum Rabi splitting; they are different measured constants.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .units import cm1_to_nm

ASYMPTOTIC_MIN_RATIO = 5.0  # drive/linewidth below which the three-Lorentzian form is unreliable


@dataclass(frozen=True)
class DriveField:
    omega_l: float  # drive frequency
    rabi: float  # drive Rabi frequency
    detuning: float = 0.0  # omega_l - omega0

    def __post_init__(self):
        if self.rabi < 0:
            raise DomainError("drive Rabi frequency must be non-negative")


@dataclass(frozen=True)
class MollowLadder:
    omega0: float
    spacing: float
    orders: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        if any(n < 0 for n in self.orders):
            raise DomainError("ladder orders must be non-negative integers")
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))


@dataclass
class ModelSpectrum:
    """A sampled model spectrum on a wavenumber grid (offsets or absolute)."""

    omega: np.ndarray
    intensity: np.ndarray
    reliable: bool = True

    def shifted(self, origin: float) -> "ModelSpectrum":
        return ModelSpectrum(self.omega + origin, self.intensity, self.reliable)


def generalized_rabi(d: DriveField) -> float:
    return math.hypot(d.rabi, d.detuning)


def mollow_triplet_lines(d: DriveField) -> tuple[float, float, float]:
    w = generalized_rabi(d)
    return d.omega_l - w, d.omega_l, d.omega_l + w


def sideband_ladder(ladder: MollowLadder) -> list[tuple[int, float, float]]:
    """(N, red line, blue line) for each order; lines at omega0 -/+ N * spacing."""
    return [(n, ladder.omega0 - n * ladder.spacing, ladder.omega0 + n * ladder.spacing) for n in ladder.orders]


def ladder_table(ladder: MollowLadder) -> list[dict]:
    rows = []
    for n, red, blue in sideband_ladder(ladder):
        rows.append(
            {
                "order": n,
                "red_cm1": red,
                "red_nm": cm1_to_nm(red) if red > 0 else None,
                "blue_cm1": blue,
                "blue_nm": cm1_to_nm(blue),
            }
        )
    return rows


def quintet_lines(omega0: float, spacing: float) -> list[float]:
    """Union of the order-1 and order-2 triplets sharing the centre line, ascending."""
    lines = {omega0 + k * spacing for k in (-2, -1, 0, 1, 2)}
    return sorted(lines)


def lorentzian(x, center, half_width, area=1.0):
    return area * (half_width / math.pi) / ((np.asarray(x) - center) ** 2 + half_width**2)


def asymptotic_mollow_spectrum(d: DriveField, gamma: float, grid) -> ModelSpectrum:
    """Strong-drive incoherent spectrum: three Lorentzians, offsets from the drive.

    Centre: area 1/2, half-width gamma/2. Sidebands at +/- generalized Rabi:
    area 1/4 each, half-width 3 gamma/4. Total area 1.
    """
    if gamma <= 0:
        raise DomainError("linewidth gamma must be positive")
    w = generalized_rabi(d)
    reliable = d.detuning == 0 and w >= ASYMPTOTIC_MIN_RATIO * gamma
    if not reliable:
        warnings.warn(
            "three-Lorentzian Mollow form needs resonant drive with Rabi >= 5 gamma; "
            "use the master-equation spectrum instead",
            stacklevel=2,
        )
    x = np.asarray(grid, dtype=float)
    s = (
        lorentzian(x, 0.0, gamma / 2, 0.5)
        + lorentzian(x, -w, 0.75 * gamma, 0.25)
        + lorentzian(x, w, 0.75 * gamma, 0.25)
    )
    return ModelSpectrum(x, s, reliable)
