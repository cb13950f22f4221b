"""Dressed-state line positions, resonance-fluorescence simulation and spectral analysis."""

from .errors import CapacityError, DomainError, MultiplicityError, NoFitError, SpectrumParseError
from .units import SpectralValue, convert, energy_difference, midpoint

__all__ = [
    "CapacityError",
    "DomainError",
    "MultiplicityError",
    "NoFitError",
    "SpectralValue",
    "SpectrumParseError",
    "convert",
    "energy_difference",
    "midpoint",
]
