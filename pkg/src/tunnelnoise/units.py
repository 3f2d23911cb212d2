"""Physical constants, unit conversions, and wavenumber helpers.

Everything downstream computes in SI; energies arrive in eV at the API
boundary and are converted exactly once.  The semantic wrappers below
(`Energy`, `Length`, `Wavenumber`) tag scalars at that boundary only,
hot loops work with the raw floats they carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "HBAR",
    "ELECTRON_MASS",
    "ELEMENTARY_CHARGE",
    "BOLTZMANN",
    "EV",
    "NM",
    "Energy",
    "Length",
    "Wavenumber",
    "ev_to_joules",
    "joules_to_ev",
    "wavenumber_free",
    "wavenumber_evanescent",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units (CODATA 2018).

    Attributes
    ----------
    hbar : float
        Reduced Planck constant, J s.
    electron_mass : float
        Electron rest mass, kg.
    elementary_charge : float
        Elementary charge, C (exact since the 2019 SI redefinition).
    boltzmann : float
        Boltzmann constant, J/K (exact).
    """

    hbar: float = 1.054571817e-34
    electron_mass: float = 9.1093837015e-31
    elementary_charge: float = 1.602176634e-19
    boltzmann: float = 1.380649e-23

    def __post_init__(self) -> None:
        for name in ("hbar", "electron_mass", "elementary_charge", "boltzmann"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"physical constant {name} must be positive")


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
ELECTRON_MASS = CONSTANTS.electron_mass
ELEMENTARY_CHARGE = CONSTANTS.elementary_charge
BOLTZMANN = CONSTANTS.boltzmann

# 1 eV in joules equals the elementary charge in coulombs.
EV = ELEMENTARY_CHARGE
NM = 1e-9


def ev_to_joules(energy_ev: float) -> float:
    """Convert an energy from electronvolts to joules."""
    return energy_ev * EV


def joules_to_ev(energy_j: float) -> float:
    """Convert an energy from joules to electronvolts."""
    return energy_j / EV


@dataclass(frozen=True)
class Energy:
    """An energy tagged with its SI value in joules."""

    joules: float

    @classmethod
    def from_ev(cls, value_ev: float) -> "Energy":
        if not math.isfinite(value_ev):
            raise DomainError(f"energy must be finite, got {value_ev} eV")
        return cls(ev_to_joules(value_ev))

    @property
    def ev(self) -> float:
        return joules_to_ev(self.joules)


@dataclass(frozen=True)
class Length:
    """A length tagged with its SI value in meters."""

    meters: float

    @classmethod
    def from_nm(cls, value_nm: float) -> "Length":
        if not math.isfinite(value_nm):
            raise DomainError(f"length must be finite, got {value_nm} nm")
        return cls(value_nm * NM)

    @property
    def nm(self) -> float:
        return self.meters / NM


@dataclass(frozen=True)
class Wavenumber:
    """A wavenumber tagged with its SI value in 1/m."""

    per_meter: float


def wavenumber_free(energy_j: float, mass: float = ELECTRON_MASS) -> float:
    """Wavenumber of a free particle, k = sqrt(2 m E) / hbar.

    Parameters
    ----------
    energy_j : float
        Kinetic energy in joules, must be positive.
    mass : float
        Particle mass in kg; defaults to the electron mass.

    Returns
    -------
    float
        Wavenumber in 1/m.
    """
    if not energy_j > 0.0:
        raise DomainError(
            f"free wavenumber needs a positive energy, got {energy_j} J"
        )
    return math.sqrt(2.0 * mass * energy_j) / HBAR


def wavenumber_evanescent(
    barrier_j: float, energy_j: float, mass: float = ELECTRON_MASS
) -> float:
    """Decay constant under a barrier, k0 = sqrt(2 m (V0 - E)) / hbar.

    Parameters
    ----------
    barrier_j : float
        Barrier height V0 in joules.
    energy_j : float
        Particle energy E in joules; must satisfy E < V0 (tunneling regime,
        above-barrier transport is out of scope).
    mass : float
        Particle mass in kg; defaults to the electron mass.

    Returns
    -------
    float
        Evanescent wavenumber in 1/m.
    """
    if not barrier_j > energy_j:
        raise DomainError(
            "evanescent wavenumber needs E < V0, got "
            f"E = {energy_j} J, V0 = {barrier_j} J"
        )
    return math.sqrt(2.0 * mass * (barrier_j - energy_j)) / HBAR
