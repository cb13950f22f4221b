"""Spectral unit conversions.

Everything downstream works in wavenumbers (cm^-1). Wavelengths are vacuum
wavelengths in nm.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError

# CODATA 2018; h, c, e and N_A are exact in the revised SI.
CONSTANTS = {
    "h": 6.62607015e-34,  # J s
    "hbar": 6.62607015e-34 / (2 * math.pi),  # J s
    "c": 299792458.0,  # m / s
    "e": 1.602176634e-19,  # C
    "epsilon0": 8.8541878128e-12,  # F / m
    "N_A": 6.02214076e23,  # 1 / mol
    "debye": 1e-21 / 299792458.0,  # C m
}

NM_CM1 = 1e7  # wavenumber (cm^-1) = NM_CM1 / wavelength (nm)
EV_CM1 = CONSTANTS["e"] / (CONSTANTS["h"] * CONSTANTS["c"] * 100.0)  # 8065.543937...
RADS_PER_CM1 = 2 * math.pi * CONSTANTS["c"] * 100.0

UNITS = ("nm", "cm-1", "eV", "rad/s")
ENERGY_UNITS = ("cm-1", "eV", "rad/s")

_ALIASES = {
    "nm": "nm",
    "cm-1": "cm-1",
    "cm^-1": "cm-1",
    "1/cm": "cm-1",
    "cm1": "cm-1",
    "ev": "eV",
    "rad/s": "rad/s",
    "rad-s": "rad/s",
}


def normalize_unit(token: str) -> str:
    try:
        return _ALIASES[token.strip().lower()]
    except KeyError:
        raise DomainError(f"unknown spectral unit {token!r}; expected one of nm, cm-1, ev, rad-s") from None


@dataclass(frozen=True)
class SpectralValue:
    """A spectral quantity with an explicit unit."""

    magnitude: float
    unit: str = "cm-1"

    def __post_init__(self):
        object.__setattr__(self, "unit", normalize_unit(self.unit))
        object.__setattr__(self, "magnitude", float(self.magnitude))
        if not math.isfinite(self.magnitude):
            raise DomainError(f"non-finite spectral magnitude {self.magnitude}")

    def to(self, unit: str) -> "SpectralValue":
        return convert(self, unit)

    @property
    def cm1(self) -> float:
        return _to_cm1(self.magnitude, self.unit)

    @property
    def nm(self) -> float:
        return convert(self, "nm").magnitude

    @property
    def ev(self) -> float:
        return convert(self, "eV").magnitude

    def __str__(self):
        return f"{self.magnitude:.6g} {self.unit}"


def _to_cm1(x: float, unit: str) -> float:
    if unit == "cm-1":
        return x
    if unit == "nm":
        if x <= 0:
            raise DomainError(f"wavelength must be positive, got {x} nm")
        return NM_CM1 / x
    if unit == "eV":
        return x * EV_CM1
    return x / RADS_PER_CM1


def _from_cm1(k: float, unit: str) -> float:
    if unit == "cm-1":
        return k
    if unit == "nm":
        if k <= 0:
            raise DomainError(f"cannot express non-positive wavenumber {k} cm^-1 as a wavelength")
        return NM_CM1 / k
    if unit == "eV":
        return k / EV_CM1
    return k * RADS_PER_CM1


def convert(v: SpectralValue, target: str) -> SpectralValue:
    target = normalize_unit(target)
    if v.unit == target:
        return v
    return SpectralValue(_from_cm1(_to_cm1(v.magnitude, v.unit), target), target)


def wavenumber(x) -> float:
    """Wavenumber in cm^-1 of a SpectralValue, or of a bare number taken as cm^-1."""
    if isinstance(x, SpectralValue):
        return x.cm1
    return float(x)


def nm_to_cm1(nm: float) -> float:
    return _to_cm1(float(nm), "nm")


def cm1_to_nm(k: float) -> float:
    return _from_cm1(float(k), "nm")


def signed_difference(a: SpectralValue, b: SpectralValue) -> SpectralValue:
    """a - b in wavenumber space."""
    return SpectralValue(wavenumber(a) - wavenumber(b), "cm-1")


def energy_difference(a: SpectralValue, b: SpectralValue) -> SpectralValue:
    return SpectralValue(abs(wavenumber(a) - wavenumber(b)), "cm-1")


def midpoint(a: SpectralValue, b: SpectralValue) -> SpectralValue:
    """Mean of two lines in wavenumber space (not wavelength space)."""
    return SpectralValue(0.5 * (wavenumber(a) + wavenumber(b)), "cm-1")


_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z^/\-1]*)\s*$")


def parse_quantity(text: str, default_unit: str = "cm-1") -> SpectralValue:
    """Parse '382nm', '1372cm-1', '3.25ev' or a bare number in ``default_unit``."""
    m = _QUANTITY.match(str(text))
    if not m:
        raise DomainError(f"cannot parse spectral quantity {text!r}")
    number, unit = m.groups()
    return SpectralValue(float(number), unit or default_unit)
