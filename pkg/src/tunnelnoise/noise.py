"""Noise budgets of the tunneling position transducer.

Converts the per-electron uncertainty results into measurement-band
spectral densities and compares them against the thermal floor of the
readout resonator.

PSD convention, stated once and used everywhere: every spectral density
in this module is SINGLE-SIDED (integrating over positive frequencies
alone recovers the variance).  Mixing conventions is the classic bug in
noise budgets; all closed forms below carry the factor of 2 that the
single-sided choice implies, and the docstrings quote units explicitly.

The quantum force PSD is computed along two independent routes - the
closed form in (k, k0, T) and the per-electron momentum-kick variance
times the electron rate - and the two are asserted to agree; a mismatch
raises the internal-consistency error rather than returning either
number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConsistencyError, DomainError, UsageError
from .fluxes import transferred_fluxes
from .scattering import BarrierSpec, Family, solve_symmetric
from .uncertainty import momentum_uncertainty
from .units import (
    BOLTZMANN,
    ELEMENTARY_CHARGE,
    HBAR,
    Energy,
    Length,
    Wavenumber,
)

__all__ = [
    "ResonatorSpec",
    "NoiseBudget",
    "quantum_force_psd",
    "langevin_force_psd",
    "feasibility_lhs",
    "shot_noise_current_psd",
    "tunnel_resistance",
    "noise_budget",
]

_ROUTE_AGREEMENT = 1e-10


@dataclass(frozen=True)
class ResonatorSpec:
    """Mechanical readout resonator parameters.

    Attributes
    ----------
    mass : float
        Suspended test mass, kg.
    f0 : float
        Resonance frequency, Hz.
    quality : float
        Quality factor Q (dimensionless).
    temperature : float
        Bath temperature, K.
    """

    mass: float
    f0: float
    quality: float
    temperature: float

    def __post_init__(self) -> None:
        for name in ("mass", "f0", "quality", "temperature"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise DomainError(f"resonator {name} must be finite, got {value!r}")
            if value <= 0.0:
                raise DomainError(
                    f"resonator {name} must be strictly positive, got {value!r}"
                )


@dataclass(frozen=True)
class NoiseBudget:
    """Assembled noise comparison for one operating point.

    Attributes
    ----------
    s_fq : float
        Quantum (measurement back-action) force PSD, N^2/Hz,
        single-sided.
    s_fl : float
        Thermal Langevin force PSD of the resonator, N^2/Hz,
        single-sided.
    feasibility_lhs : float
        The normalized parameter product that must stay below 1 for
        quantum dominance (assumes a decay constant of 1e10 1/m).
    psd_ratio : float
        Directly computed ``s_fl / s_fq``; tracks ``feasibility_lhs``
        up to an O(1) constant that is reported, never asserted.
    shot_psd : float
        Shot-noise current spectral density, A/sqrt(Hz).
    tunnel_current : float
        Operating current I0, A.
    electron_energy : float
        Longitudinal electron energy used for the quantum PSD, eV.
    barrier : BarrierSpec
        Barrier the quantum PSD was evaluated on.
    """

    s_fq: float
    s_fl: float
    feasibility_lhs: float
    psd_ratio: float
    shot_psd: float
    tunnel_current: float
    electron_energy: float
    barrier: BarrierSpec


def _check_current(I0: float) -> float:
    try:
        current = float(I0)
    except (TypeError, ValueError):
        raise UsageError(f"current must be a real number, got {I0!r}") from None
    if not math.isfinite(current) or current <= 0.0:
        raise DomainError(f"current must be positive and finite, got {I0!r}")
    return current


def quantum_force_psd(I0: float, E: Energy, spec: BarrierSpec) -> float:
    """Single-sided quantum force PSD of the tunneling readout, N^2/Hz.

    Valid for the flat symmetric barrier (the operating regime treats
    the junction as one; biased families must be approximated by their
    rectangular equivalent explicitly by the caller).  Two routes are
    evaluated: the closed form

        ``(I0/e) hbar^2 k^2 (1/2) [ (1+(k0/k)^2)^2 - (1-(k0/k)^2)^2 (1-T) ]``

    and twice the per-conducted-electron momentum-kick variance times
    the electron rate ``I0/e`` (one conducted electron corresponds to
    ``1/T`` attempts).  They must agree to 1e-10 relative.
    """
    current = _check_current(I0)
    if spec.family is not Family.SYMMETRIC_RECT:
        raise UsageError(
            "quantum_force_psd needs the symmetric flat barrier; build the "
            f"rectangular approximation explicitly (got {spec.family.value})"
        )
    sol = solve_symmetric(E, spec)
    k = sol.k.per_meter
    k0 = sol.k0.per_meter
    rate = current / ELEMENTARY_CHARGE
    ratio_sq = (k0 / k) ** 2
    closed = (
        rate
        * HBAR**2
        * k**2
        * 0.5
        * ((1.0 + ratio_sq) ** 2 - (1.0 - ratio_sq) ** 2 * (1.0 - sol.T))
    )
    kick = momentum_uncertainty(transferred_fluxes(sol), sol, N=1.0 / sol.T)
    from_kicks = 2.0 * kick**2 * rate
    if abs(closed - from_kicks) > _ROUTE_AGREEMENT * max(abs(closed), abs(from_kicks)):
        raise ConsistencyError(
            "quantum-force-PSD routes disagree beyond 1e-10 relative: "
            f"closed form {closed!r}, kick-variance route {from_kicks!r}"
        )
    return closed


def langevin_force_psd(res: ResonatorSpec) -> float:
    """Single-sided thermal Langevin force PSD of the resonator, N^2/Hz.

    ``4 m (2 pi f0) kB theta / Q``.
    """
    return (
        4.0
        * res.mass
        * (2.0 * math.pi * res.f0)
        * BOLTZMANN
        * res.temperature
        / res.quality
    )


def feasibility_lhs(I0: float, res: ResonatorSpec) -> float:
    """Normalized quantum-dominance parameter product (dimensionless).

    ``(1e-6 A / I0) (m / 1e-10 kg) (theta / 10 mK) (f0 / 1e5 Hz)
    (1e7 / Q)``; below 1 the quantum force PSD exceeds the thermal one
    under the normalization's assumed decay constant of 1e10 1/m.  Each
    factor is unity at the nominal operating point.
    """
    current = _check_current(I0)
    return (
        (1e-6 / current)
        * (res.mass / 1e-10)
        * (res.temperature / 0.01)
        * (res.f0 / 1e5)
        * (1e7 / res.quality)
    )


def shot_noise_current_psd(I0: float) -> float:
    """Shot-noise current spectral density ``sqrt(2 e I0)``, A/sqrt(Hz),
    single-sided."""
    return math.sqrt(2.0 * ELEMENTARY_CHARGE * _check_current(I0))


def tunnel_resistance(
    R0: float, k0: "Wavenumber | float", x: "float | Length"
) -> float:
    """Junction resistance ``R0 exp(-2 k0 x)`` at electrode separation x.

    The exponential law holds in the opaque regime (``k0 x >> 1``); R0
    is the prefactor resistance at zero separation.
    """
    if not (isinstance(R0, (int, float)) and math.isfinite(R0) and R0 > 0.0):
        raise DomainError(f"zero-separation resistance must be positive, got {R0!r}")
    decay = k0.per_meter if isinstance(k0, Wavenumber) else float(k0)
    if not math.isfinite(decay) or decay <= 0.0:
        raise DomainError(f"decay constant must be positive, got {k0!r}")
    position = x.meters if isinstance(x, Length) else float(x)
    if not math.isfinite(position):
        raise DomainError(f"separation must be finite, got {x!r}")
    return R0 * math.exp(-2.0 * decay * position)


def noise_budget(
    I0: float,
    res: ResonatorSpec,
    E: Energy,
    spec: BarrierSpec,
) -> NoiseBudget:
    """Assemble the full comparison at one operating point.

    The quantum PSD needs the symmetric flat barrier; ``psd_ratio`` is
    the directly computed ``s_fl/s_fq``, reported alongside the
    normalized ``feasibility_lhs`` without asserting their O(1)
    relation.
    """
    current = _check_current(I0)
    s_fq = quantum_force_psd(current, E, spec)
    s_fl = langevin_force_psd(res)
    return NoiseBudget(
        s_fq=s_fq,
        s_fl=s_fl,
        feasibility_lhs=feasibility_lhs(current, res),
        psd_ratio=s_fl / s_fq,
        shot_psd=shot_noise_current_psd(current),
        tunnel_current=current,
        electron_energy=E.ev,
        barrier=spec,
    )
