"""Figures of merit for a two-ion picocavity: gap, mode volume, Q, vacuum field, g, Purcell factor.

Lengths are nm, volumes nm^3, dipoles debye. The mode is modeled as a cylinder
whose radius is the ionic radius and whose height is the interionic gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .units import CONSTANTS, ENERGY_UNITS, RADS_PER_CM1, SpectralValue, convert


def _positive(name, x):
    if not x > 0:
        raise DomainError(f"{name} must be positive, got {x}")


@dataclass(frozen=True)
class ResonatorGeometry:
    atom_separation: float  # D, nm
    ionic_radius: float  # R, nm

    def __post_init__(self):
        _positive("atom_separation", self.atom_separation)
        if self.ionic_radius < 0:
            raise DomainError(f"ionic_radius must be non-negative, got {self.ionic_radius}")


@dataclass(frozen=True)
class Resonator:
    mode_volume: float  # nm^3
    quality_factor: float
    resonance: SpectralValue

    def __post_init__(self):
        _positive("mode_volume", self.mode_volume)
        _positive("quality_factor", self.quality_factor)

    def purcell(self, n_medium: float = 1.0) -> float:
        return purcell_factor(self.resonance, n_medium, self.quality_factor, self.mode_volume)


@dataclass(frozen=True)
class VacuumField:
    amplitude: float  # V/m
    omega: float  # rad/s

    def __post_init__(self):
        _positive("amplitude", self.amplitude)


def interfacial_gap(geom: ResonatorGeometry) -> float:
    d = geom.atom_separation - 2 * geom.ionic_radius
    if d <= 0:
        raise DomainError(
            f"contact regime: separation {geom.atom_separation} nm <= 2 x ionic radius {geom.ionic_radius} nm"
        )
    return d


def mode_volume_cylinder(geom: ResonatorGeometry) -> float:
    return math.pi * geom.ionic_radius**2 * interfacial_gap(geom)


def quality_factor(center: SpectralValue, fwhm: SpectralValue) -> float:
    """Q = center / FWHM with both in wavenumbers.

    The width must be given in an energy unit; a width in nm is not a
    wavelength and cannot be inverted.
    """
    if fwhm.unit not in ENERGY_UNITS:
        raise DomainError("linewidth must be given in an energy unit (cm-1, eV, rad/s)")
    width = convert(fwhm, "cm-1").magnitude
    _positive("fwhm", width)
    c = convert(center, "cm-1").magnitude
    _positive("center", c)
    return c / width


def purcell_factor(wavelength: SpectralValue, n_medium: float, q: float, volume_nm3: float) -> float:
    """F_p = 3/(4 pi^2) (lambda/n)^3 Q/V."""
    lam = convert(wavelength, "nm").magnitude
    for name, x in (("n_medium", n_medium), ("Q", q), ("V", volume_nm3)):
        _positive(name, x)
    return 3.0 / (4.0 * math.pi**2) * (lam / n_medium) ** 3 * q / volume_nm3


def vacuum_field_amplitude(omega: SpectralValue, volume_nm3: float) -> VacuumField:
    """Zero-point field E0 = sqrt(hbar w / (2 eps0 V))."""
    w = convert(omega, "rad/s").magnitude
    _positive("omega", w)
    _positive("V", volume_nm3)
    v_m3 = volume_nm3 * 1e-27
    e0 = math.sqrt(CONSTANTS["hbar"] * w / (2 * CONSTANTS["epsilon0"] * v_m3))
    return VacuumField(e0, w)


def coupling_rate_from_dipole(dipole_debye: float, field: VacuumField) -> SpectralValue:
    """|g| = mu E0 / hbar, returned in cm^-1."""
    _positive("dipole", dipole_debye)
    g = dipole_debye * CONSTANTS["debye"] * field.amplitude / CONSTANTS["hbar"]
    return SpectralValue(g / RADS_PER_CM1, "cm-1")
