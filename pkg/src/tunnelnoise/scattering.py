"""Stationary scattering states for one-dimensional tunneling barriers.

Three barrier shapes are supported, all with an incident plane wave
``e^{ikx}/sqrt(2 pi)`` arriving from the left:

* a rectangular barrier of height ``V0`` between flat exteriors at the
  same potential (symmetric),
* a rectangular barrier whose right exterior sits ``phi`` below the left
  one (asymmetric),
* a linearly tilted barrier, ``V0`` at the left edge dropping to
  ``V0 - phi`` at the right edge, with the right exterior at ``-phi``
  (a constant electric field across the gap).

The rectangular families share one closed-form core written in terms of
``exp(-2*k0*l)`` so that nothing overflows at any opacity; the
transmission probability underflows gracefully to zero instead.  The
tilted barrier is solved with Airy functions in scaled arithmetic: the
matching system is eliminated exactly, and every exponential factor is
kept as an explicit exponent so that barriers far beyond the reach of
unscaled Airy values still solve.  Interior wavefunction data is stored
in anchored form (coefficients tied to the barrier edges), which stays
representable even when the textbook coefficients ``c_plus``/``c_minus``
would over- or underflow.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .airy import AiryQuad, airy_all, airy_scaled
from .errors import DomainError, UsageError
from .units import (
    ELECTRON_MASS,
    HBAR,
    Energy,
    Length,
    Wavenumber,
    wavenumber_evanescent,
    wavenumber_free,
)

__all__ = [
    "Family",
    "BarrierSpec",
    "ScatteringSolution",
    "WavefunctionSample",
    "PHI_DISPATCH_EV",
    "solve",
    "solve_symmetric",
    "solve_asymmetric",
    "solve_linear_field",
    "eval_wavefunction",
]

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Below this bias the Airy variables of the tilted barrier degenerate
# (the scaling parameter goes to zero while the turning point runs off
# to infinity), so the solver falls back to the rectangular core, which
# is the exact zero-field limit and an O(phi) approximation otherwise.
PHI_DISPATCH_EV = 1e-9

# exp() overflows just above this; used when materializing the textbook
# interior coefficients, which are allowed to saturate to inf/0.
_MAX_EXPONENT = 709.0


class Family(enum.Enum):
    """Barrier shape selector."""

    SYMMETRIC_RECT = "symmetric-rect"
    ASYMMETRIC_RECT = "asymmetric-rect"
    LINEAR_FIELD = "linear-field"


@dataclass(frozen=True)
class BarrierSpec:
    """Geometry and energetics of a single tunneling barrier.

    Attributes
    ----------
    family : Family
        Barrier shape.
    V0 : Energy
        Barrier height above the left exterior potential.
    phi : Energy
        Potential drop across the barrier (0 for the symmetric shape).
        The right exterior sits at ``-phi``.
    gap : Length
        Barrier width ``l = b - a``.
    a : Length
        Position of the left edge; purely a phase convention, zero by
        default.
    """

    family: Family
    V0: Energy
    phi: Energy
    gap: Length
    a: Length = Length(0.0)

    def __post_init__(self) -> None:
        if not self.gap.meters > 0.0:
            raise DomainError(f"barrier gap must be positive, got {self.gap.meters} m")
        if not self.V0.joules > 0.0:
            raise DomainError(f"barrier height must be positive, got {self.V0.ev} eV")
        if self.phi.joules < 0.0:
            raise DomainError(f"potential drop must be >= 0, got {self.phi.ev} eV")
        if not math.isfinite(self.a.meters):
            raise DomainError(f"left edge must be finite, got {self.a.meters} m")
        if self.family is Family.SYMMETRIC_RECT and self.phi.joules != 0.0:
            raise DomainError(
                "symmetric barrier requires a zero potential drop, got "
                f"{self.phi.ev} eV"
            )

    @classmethod
    def symmetric(cls, v0_ev: float, gap_nm: float, a_nm: float = 0.0) -> "BarrierSpec":
        """Rectangular barrier with equal exterior potentials."""
        return cls(
            Family.SYMMETRIC_RECT,
            Energy.from_ev(v0_ev),
            Energy.from_ev(0.0),
            Length.from_nm(gap_nm),
            Length.from_nm(a_nm),
        )

    @classmethod
    def asymmetric(
        cls, v0_ev: float, phi_ev: float, gap_nm: float, a_nm: float = 0.0
    ) -> "BarrierSpec":
        """Rectangular barrier with the right exterior lowered by phi."""
        return cls(
            Family.ASYMMETRIC_RECT,
            Energy.from_ev(v0_ev),
            Energy.from_ev(phi_ev),
            Length.from_nm(gap_nm),
            Length.from_nm(a_nm),
        )

    @classmethod
    def linear_field(
        cls, v0_ev: float, phi_ev: float, gap_nm: float, a_nm: float = 0.0
    ) -> "BarrierSpec":
        """Linearly tilted barrier, V0 at the left edge, V0 - phi at the right."""
        return cls(
            Family.LINEAR_FIELD,
            Energy.from_ev(v0_ev),
            Energy.from_ev(phi_ev),
            Length.from_nm(gap_nm),
            Length.from_nm(a_nm),
        )

    @property
    def b(self) -> Length:
        """Position of the right edge, ``a + gap``."""
        return Length(self.a.meters + self.gap.meters)

    def potential(self, x_m: float) -> float:
        """Potential energy in joules at position ``x_m`` (meters).

        The interior convention is closed on both edges; exact edge
        values only matter to callers sampling midpoints anyway.
        """
        a = self.a.meters
        b = a + self.gap.meters
        if x_m < a:
            return 0.0
        if x_m > b:
            return 0.0 if self.family is Family.SYMMETRIC_RECT else -self.phi.joules
        if self.family is Family.LINEAR_FIELD:
            return self.V0.joules - self.phi.joules * (x_m - a) / self.gap.meters
        return self.V0.joules


@dataclass(frozen=True)
class _RectInterior:
    """Interior wave anchored at the edges: ``g_plus`` multiplies the
    exponential growing toward b, ``g_minus`` the one growing toward a.
    Both anchored exponentials are <= 1 everywhere in the barrier."""

    g_plus: complex
    g_minus: complex
    k0: float
    a: float
    b: float


@dataclass(frozen=True)
class _AiryInterior:
    """Interior wave in scaled Airy form.

    ``g_ai``/``g_bi`` multiply the scaled Airy pair at the local
    argument ``z(x)``, together with exponent shifts that are never
    positive inside the barrier.  The shifts are reconstructed from
    exponent *differences* with exactly computable widths; subtracting
    the (possibly enormous) absolute exponents would lose the shifts in
    rounding long before the scaled values themselves degrade.
    """

    g_ai: complex
    g_bi: complex
    alpha_cbrt: float
    a_bar: float
    b_bar: float
    delta_zeta: float
    a: float
    b: float


@dataclass(frozen=True)
class ScatteringSolution:
    """A solved stationary tunneling state.

    Attributes
    ----------
    t, r : complex
        Transmission and reflection amplitudes against the incident
        plane wave of unit coefficient.
    c_plus, c_minus : complex
        Textbook interior coefficients: for the rectangular shapes the
        weights of ``e^{+k0 x}`` and ``e^{-k0 x}``, for the tilted
        barrier the weights of the regular and irregular Airy function.
        These are exact values and may saturate to 0 or inf for very
        opaque barriers; ``eval_wavefunction`` does not use them.
    T, R : float
        Transmission and reflection probabilities, ``T + R = 1``.
    k, k_bar, k0 : Wavenumber
        Incident, transmitted, and evanescent wavenumbers (``k_bar = k``
        for the symmetric shape).
    incident_flux : float
        Probability flux of the incident wave, ``hbar k / (2 pi m)``.
    barrier : BarrierSpec
        The barrier that was solved.
    energy : Energy
        Incident kinetic energy.
    """

    t: complex
    r: complex
    c_plus: complex
    c_minus: complex
    T: float
    R: float
    k: Wavenumber
    k_bar: Wavenumber
    k0: Wavenumber
    incident_flux: float
    barrier: BarrierSpec
    energy: Energy
    interior: object = field(repr=False, default=None)

    @property
    def tilted_interior(self) -> bool:
        """True when the stored interior is the Airy form; False for the
        flat-interior core, including tilted barriers whose bias was
        small enough to dispatch to it.  Flux bookkeeping needs this to
        size the potential step actually present at the right edge."""
        return isinstance(self.interior, _AiryInterior)


@dataclass(frozen=True)
class WavefunctionSample:
    """Wavefunction value and first three derivatives at one point."""

    x: Length
    psi: complex
    d1: complex
    d2: complex
    d3: complex


def _saturating_scale(value: complex, exponent: float) -> complex:
    """``value * exp(exponent)`` with overflow saturated to inf and deep
    underflow flushed to zero, keeping the solver exception-free."""
    if exponent > _MAX_EXPONENT:
        return complex(math.inf, math.inf)
    if exponent < -_MAX_EXPONENT - 45.0:
        return 0j
    return value * math.exp(exponent)


def _check_energy(energy: Energy, spec: BarrierSpec) -> None:
    e = energy.joules
    if not e > 0.0:
        raise DomainError(f"incident energy must be positive, got {energy.ev} eV")
    if not e < spec.V0.joules:
        raise DomainError(
            "tunneling requires E < V0, got "
            f"E = {energy.ev} eV, V0 = {spec.V0.ev} eV"
        )


def _solve_rect(energy: Energy, spec: BarrierSpec) -> ScatteringSolution:
    """Shared closed-form core for a flat interior at height V0.

    Valid for both rectangular families and used as the zero-field
    limit of the tilted barrier.  All exponentials appear as
    ``exp(-k0 l)`` or smaller, so arbitrarily opaque barriers produce
    finite (possibly underflowed) amplitudes rather than overflow.
    """
    e = energy.joules
    k = wavenumber_free(e)
    k_bar = wavenumber_free(e + spec.phi.joules)
    k0 = wavenumber_evanescent(spec.V0.joules, e)
    a = spec.a.meters
    length = spec.gap.meters
    b = a + length

    u = k0 * length
    m2 = math.exp(-2.0 * u)
    one_p = 1.0 + m2
    one_m = 1.0 - m2

    # Denominator of every amplitude; |d_hat|^2 >= (k0 (k + k_bar)/2)^2 > 0.
    d_hat = 0.5 * complex(k0 * (k + k_bar) * one_p, (k0 * k0 - k * k_bar) * one_m)

    # t_anchored carries everything except the exp(-u) tunneling factor.
    t_anchored = 2.0 * k * k0 * cmath.exp(1j * (k * a - k_bar * b)) / d_hat
    t = t_anchored * math.exp(-u) if u <= _MAX_EXPONENT else 0j
    r = (
        cmath.exp(2j * k * a)
        * complex(k0 * (k - k_bar) * one_p, -(k * k_bar + k0 * k0) * one_m)
        / (2.0 * d_hat)
    )

    # (k_bar/k) |t|^2 without squaring the underflow-prone t itself.
    # Rounding can push either probability a few ulps past 1.
    T = min(1.0, (k_bar / k) * (abs(t_anchored) ** 2) * m2)
    R = min(1.0, abs(r) ** 2)

    phase_b = cmath.exp(1j * k_bar * b)
    g_plus = 0.5 * t * phase_b * complex(1.0, k_bar / k0)
    g_minus = 0.5 * t_anchored * phase_b * complex(1.0, -k_bar / k0)

    return ScatteringSolution(
        t=t,
        r=r,
        c_plus=_saturating_scale(g_plus, -k0 * b),
        c_minus=_saturating_scale(g_minus, k0 * a),
        T=T,
        R=R,
        k=Wavenumber(k),
        k_bar=Wavenumber(k_bar),
        k0=Wavenumber(k0),
        incident_flux=HBAR * k / (2.0 * math.pi * ELECTRON_MASS),
        barrier=spec,
        energy=energy,
        interior=_RectInterior(g_plus=g_plus, g_minus=g_minus, k0=k0, a=a, b=b),
    )


def solve_symmetric(energy: Energy, spec: BarrierSpec) -> ScatteringSolution:
    """Solve the symmetric rectangular barrier.

    Parameters
    ----------
    energy : Energy
        Incident kinetic energy, ``0 < E < V0``.
    spec : BarrierSpec
        Must have ``family = Family.SYMMETRIC_RECT``.
    """
    if spec.family is not Family.SYMMETRIC_RECT:
        raise UsageError(f"solve_symmetric got a {spec.family.value} barrier")
    _check_energy(energy, spec)
    return _solve_rect(energy, spec)


def solve_asymmetric(energy: Energy, spec: BarrierSpec) -> ScatteringSolution:
    """Solve the asymmetric rectangular barrier (right exterior at -phi)."""
    if spec.family is not Family.ASYMMETRIC_RECT:
        raise UsageError(f"solve_asymmetric got a {spec.family.value} barrier")
    _check_energy(energy, spec)
    return _solve_rect(energy, spec)


def _zeta_difference(hi: float, lo: float, width: float) -> float:
    """Difference of Airy exponents, ``(2/3)(hi^{3/2} - lo^{3/2})``, for
    ``hi >= lo >= 0`` with ``hi - lo = width`` supplied exactly.

    The factored form keeps the result accurate to a relative rounding
    level even when ``hi`` and ``lo`` agree to many digits (weak tilts
    push both beyond 1e5 while their difference stays order ten)."""
    return (
        (2.0 / 3.0)
        * width
        * (hi + math.sqrt(hi * lo) + lo)
        / (math.sqrt(hi) + math.sqrt(lo))
    )


def _zeta_single(z: float) -> float:
    """Airy exponent ``(2/3) z^{3/2}`` for ``z >= 0``."""
    return (2.0 / 3.0) * z * math.sqrt(z)


def solve_linear_field(energy: Energy, spec: BarrierSpec) -> ScatteringSolution:
    """Solve the linearly tilted barrier with Airy functions.

    The matching system at the two edges is eliminated exactly; the
    elimination is arranged in scaled Airy values with every exponent
    tracked explicitly, so strong scaling (weak tilts push the Airy
    arguments to 1e5 and beyond) cannot overflow.  Biases at or below
    ``PHI_DISPATCH_EV`` are delegated to the rectangular core, which is
    the exact limit of the degenerating Airy representation.
    """
    if spec.family is not Family.LINEAR_FIELD:
        raise UsageError(f"solve_linear_field got a {spec.family.value} barrier")
    _check_energy(energy, spec)
    if spec.phi.ev <= PHI_DISPATCH_EV:
        return _solve_rect(energy, spec)

    e = energy.joules
    v0 = spec.V0.joules
    phi = spec.phi.joules
    k = wavenumber_free(e)
    k_bar = wavenumber_free(e + phi)
    k0 = wavenumber_evanescent(v0, e)
    a = spec.a.meters
    length = spec.gap.meters
    b = a + length

    # Local Airy argument z(x) = kappa (beta - x), where beta is the
    # point at which the extended linear potential crosses the incident
    # energy; both edge arguments are built without subtraction.
    kappa = ((2.0 * ELECTRON_MASS / (HBAR * HBAR)) * phi / length) ** (1.0 / 3.0)
    a_bar = kappa * (v0 - e) * length / phi
    b_bar = kappa * length * ((v0 - e) - phi) / phi

    quad_a, zeta_a = airy_scaled(a_bar)
    if b_bar > 0.0:
        quad_b, zeta_b = airy_scaled(b_bar)
        delta_zeta = _zeta_difference(a_bar, b_bar, kappa * length)
    else:
        # Turning point inside the barrier: the right-edge values are
        # order one, so they stay unscaled (zero exponent).
        quad_b = airy_all(b_bar)
        zeta_b = 0.0
        delta_zeta = _zeta_single(a_bar)

    # One-sided elimination of the interior: each factor is a scaled
    # combination of an Airy value and its derivative at one edge.
    p_a = kappa * quad_a.ai_prime - 1j * k * quad_a.ai
    q_a = kappa * quad_a.bi_prime - 1j * k * quad_a.bi
    p_b = kappa * quad_b.ai_prime + 1j * k_bar * quad_b.ai
    q_b = kappa * quad_b.bi_prime + 1j * k_bar * quad_b.bi

    damp2 = math.exp(-2.0 * delta_zeta) if delta_zeta <= 350.0 else 0.0
    f_tilde = damp2 * p_a * q_b - q_a * p_b
    if f_tilde == 0:
        raise DomainError(
            "degenerate matching system for the tilted barrier at "
            f"E = {energy.ev} eV, phi = {spec.phi.ev} eV"
        )

    phase = cmath.exp(1j * (k * a - k_bar * b))
    damp = math.exp(-delta_zeta) if delta_zeta <= _MAX_EXPONENT else 0.0
    t = -(2j * k / math.pi) * kappa * phase * damp / f_tilde
    T = min(
        1.0, (k_bar / k) * (2.0 * k * kappa / math.pi) ** 2 * damp2 / abs(f_tilde) ** 2
    )
    r = -cmath.exp(2j * k * a) * (
        1.0 + 2j * k * (damp2 * q_b * quad_a.ai - p_b * quad_a.bi) / f_tilde
    )
    R = min(1.0, abs(r) ** 2)

    g_ai = -2j * k * cmath.exp(1j * k * a) * q_b / f_tilde
    g_bi = 2j * k * cmath.exp(1j * k * a) * p_b / f_tilde

    return ScatteringSolution(
        t=t,
        r=r,
        c_plus=_saturating_scale(g_ai, 2.0 * zeta_b - zeta_a),
        c_minus=_saturating_scale(g_bi, -zeta_a),
        T=T,
        R=R,
        k=Wavenumber(k),
        k_bar=Wavenumber(k_bar),
        k0=Wavenumber(k0),
        incident_flux=HBAR * k / (2.0 * math.pi * ELECTRON_MASS),
        barrier=spec,
        energy=energy,
        interior=_AiryInterior(
            g_ai=g_ai,
            g_bi=g_bi,
            alpha_cbrt=kappa,
            a_bar=a_bar,
            b_bar=b_bar,
            delta_zeta=delta_zeta,
            a=a,
            b=b,
        ),
    )


_SOLVERS = {
    Family.SYMMETRIC_RECT: solve_symmetric,
    Family.ASYMMETRIC_RECT: solve_asymmetric,
    Family.LINEAR_FIELD: solve_linear_field,
}


def solve(energy: Energy, spec: BarrierSpec) -> ScatteringSolution:
    """Dispatch to the solver matching ``spec.family``."""
    return _SOLVERS[spec.family](energy, spec)


def _sample_exterior_left(sol: ScatteringSolution, x: float) -> WavefunctionSample:
    k = sol.k.per_meter
    inc = cmath.exp(1j * k * x)
    ref = sol.r * cmath.exp(-1j * k * x)
    psi = (inc + ref) / _SQRT_TWO_PI
    d1 = 1j * k * (inc - ref) / _SQRT_TWO_PI
    return WavefunctionSample(
        x=Length(x), psi=psi, d1=d1, d2=-k * k * psi, d3=-k * k * d1
    )


def _sample_exterior_right(sol: ScatteringSolution, x: float) -> WavefunctionSample:
    kb = sol.k_bar.per_meter
    psi = sol.t * cmath.exp(1j * kb * x) / _SQRT_TWO_PI
    d1 = 1j * kb * psi
    return WavefunctionSample(
        x=Length(x), psi=psi, d1=d1, d2=-kb * kb * psi, d3=-kb * kb * d1
    )


def _sample_rect_interior(inner: _RectInterior, x: float) -> WavefunctionSample:
    k0 = inner.k0
    # Anchored exponentials, both <= 1 for a <= x <= b.
    toward_b = math.exp(-k0 * (inner.b - x))
    toward_a = math.exp(-k0 * (x - inner.a))
    up = inner.g_plus * toward_b
    down = inner.g_minus * toward_a
    psi = (up + down) / _SQRT_TWO_PI
    d1 = k0 * (up - down) / _SQRT_TWO_PI
    return WavefunctionSample(
        x=Length(x), psi=psi, d1=d1, d2=k0 * k0 * psi, d3=k0 * k0 * d1
    )


def _sample_airy_interior(inner: _AiryInterior, x: float) -> WavefunctionSample:
    kappa = inner.alpha_cbrt
    # Widths from the edges are exact products; every exponent below is
    # a difference taken through them, so no large-exponent
    # cancellation can creep in even at extreme scaling.
    w_from_a = kappa * (x - inner.a)
    w_from_b = kappa * (inner.b - x)
    if inner.b_bar > 0.0:
        z = inner.b_bar + w_from_b
        quad, _ = airy_scaled(z)
        # shift_ai exponent: 2 zeta_b - zeta_a - zeta_x, assembled as
        # -(zeta_a - zeta_b) - (zeta_x - zeta_b).
        exp_ai = -inner.delta_zeta - _zeta_difference(z, inner.b_bar, w_from_b)
        exp_bi = -_zeta_difference(inner.a_bar, z, w_from_a)
    else:
        z = inner.a_bar - w_from_a
        if z > 0.0:
            quad, _ = airy_scaled(z)
            zeta_x = _zeta_single(z)
        else:
            quad = airy_all(z)
            zeta_x = 0.0
        # Right-edge values are unscaled here (zeta_b = 0) and every
        # exponent is small, so plain arithmetic is safe.
        exp_ai = -inner.delta_zeta - zeta_x
        exp_bi = zeta_x - inner.delta_zeta
    w_ai = inner.g_ai * math.exp(exp_ai)
    w_bi = inner.g_bi * math.exp(exp_bi)
    value = w_ai * quad.ai + w_bi * quad.bi
    slope = w_ai * quad.ai_prime + w_bi * quad.bi_prime
    psi = value / _SQRT_TWO_PI
    d1 = -kappa * slope / _SQRT_TWO_PI
    d2 = kappa * kappa * z * psi
    d3 = -(kappa**3) * (value + z * slope) / _SQRT_TWO_PI
    return WavefunctionSample(x=Length(x), psi=psi, d1=d1, d2=d2, d3=d3)


def eval_wavefunction(
    sol: ScatteringSolution, x: "float | Length", side: str = "right"
) -> WavefunctionSample:
    """Evaluate the wavefunction and its first three derivatives.

    Parameters
    ----------
    sol : ScatteringSolution
        A solved state.
    x : float or Length
        Position; a bare float is taken in meters.
    side : {"right", "left"}
        Which region to use when ``x`` falls exactly on a barrier edge:
        the region touching the edge from that side.  Away from the
        edges both choices agree.  The default gives the interior value
        at the left edge and the transmitted value at the right edge.

    Returns
    -------
    WavefunctionSample
        psi and derivatives d1..d3, all with the incident-wave
        normalization ``1/sqrt(2 pi)``.
    """
    if side not in ("left", "right"):
        raise UsageError(f"side must be 'left' or 'right', got {side!r}")
    x_m = x.meters if isinstance(x, Length) else float(x)
    if not math.isfinite(x_m):
        raise DomainError(f"position must be finite, got {x_m}")
    a = sol.barrier.a.meters
    b = a + sol.barrier.gap.meters

    if x_m < a or (x_m == a and side == "left"):
        return _sample_exterior_left(sol, x_m)
    if x_m > b or (x_m == b and side == "right"):
        return _sample_exterior_right(sol, x_m)
    inner = sol.interior
    if isinstance(inner, _AiryInterior):
        return _sample_airy_interior(inner, x_m)
    return _sample_rect_interior(inner, x_m)
