"""Probability, momentum, and momentum-squared transport bookkeeping.

For a stationary scattering state the three conserved-quantity pairs
(density, current) are quadratic forms in the wavefunction and its
derivatives.  This module evaluates them at arbitrary points, forms the
fluxes transferred to the test-mass wall at the right barrier edge, and
checks the step-discontinuity relations that tie interior and exterior
one-sided values together.

Conventions: currents are per unit time with the incident-wave
normalization ``1/sqrt(2 pi)``, masses are the electron mass, and
potential steps enter analytically as ``(step height) x (local
density)`` terms; integrating across a step numerically cannot
converge, so it is never attempted.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import UsageError
from .scattering import Family, ScatteringSolution, WavefunctionSample, eval_wavefunction
from .units import ELECTRON_MASS, HBAR, Length

__all__ = [
    "Side",
    "FluxReport",
    "TransferredFluxes",
    "JumpResiduals",
    "currents_at",
    "transferred_fluxes",
    "jump_residuals",
]

_TWO_PI = 2.0 * math.pi


class Side(enum.Enum):
    """One-sided limit selector for sampling at potential steps.

    ``BULK`` marks a point in the interior of a region, where both
    one-sided limits coincide (at a step it behaves like
    ``RIGHT_LIMIT``).
    """

    LEFT_LIMIT = "left_limit"
    RIGHT_LIMIT = "right_limit"
    BULK = "bulk"


@dataclass(frozen=True)
class FluxReport:
    """Densities and currents of the three transport laws at one point.

    Attributes
    ----------
    j : float
        Probability current; position independent for a stationary
        state.
    j_p : float
        Momentum current.
    j_p2 : float
        Momentum-squared current; negative in a classically forbidden
        bulk, where the local kinetic-energy flux is negative.
    rho, rho_p, rho_p2 : float
        The matching densities (probability, momentum, momentum
        squared).
    x : Length
        Sample position.
    side : Side
        Which one-sided limit was taken.
    """

    j: float
    j_p: float
    j_p2: float
    rho: float
    rho_p: float
    rho_p2: float
    x: Length
    side: Side


@dataclass(frozen=True)
class TransferredFluxes:
    """Momentum and momentum-squared fluxes absorbed by the wall at b.

    ``v2_description`` records which part of the barrier force was
    attributed to the wall when forming the fluxes.
    """

    j_p_t: float
    j_p2_t: float
    v2_description: str


@dataclass(frozen=True)
class JumpResiduals:
    """Closure residuals of the four step-discontinuity relations.

    Each residual is the absolute mismatch of one relation, expressed
    in a natural flux unit built from the solution's wavenumbers so
    that values are comparable across parameter sets.  Exact solutions
    close at rounding level; values near 1 signal an inconsistent
    state.
    """

    momentum_left_edge: float
    momentum_right_edge: float
    momentum_sq_left_edge: float
    momentum_sq_right_edge: float

    @property
    def worst(self) -> float:
        return max(
            self.momentum_left_edge,
            self.momentum_right_edge,
            self.momentum_sq_left_edge,
            self.momentum_sq_right_edge,
        )


def _report_from_sample(sample: WavefunctionSample, side: Side) -> FluxReport:
    psi_c = sample.psi.conjugate()
    d1_c = sample.d1.conjugate()
    rho = abs(sample.psi) ** 2
    im_psi_d1 = (psi_c * sample.d1).imag
    j = HBAR / ELECTRON_MASS * im_psi_d1
    j_p = (
        HBAR**2
        / (2.0 * ELECTRON_MASS)
        * (abs(sample.d1) ** 2 - (psi_c * sample.d2).real)
    )
    j_p2 = (
        -(HBAR**3)
        / (2.0 * ELECTRON_MASS)
        * ((psi_c * sample.d3).imag - (d1_c * sample.d2).imag)
    )
    return FluxReport(
        j=j,
        j_p=j_p,
        j_p2=j_p2,
        rho=rho,
        rho_p=HBAR * im_psi_d1,
        rho_p2=-(HBAR**2) * (psi_c * sample.d2).real,
        x=sample.x,
        side=side,
    )


def currents_at(
    sol: ScatteringSolution, x: "float | Length", side: Side = Side.BULK
) -> FluxReport:
    """Evaluate all six densities and currents at one point.

    Parameters
    ----------
    sol : ScatteringSolution
        A solved state.
    x : float or Length
        Position; bare floats are meters.
    side : Side
        One-sided limit to take if ``x`` sits exactly on a barrier
        edge.
    """
    if not isinstance(side, Side):
        raise UsageError(f"side must be a fluxes.Side member, got {side!r}")
    eval_side = "left" if side is Side.LEFT_LIMIT else "right"
    return _report_from_sample(eval_wavefunction(sol, x, side=eval_side), side)


def _amplitude_exterior_values(sol: ScatteringSolution):
    """Exterior one-sided quantities expressed through the amplitudes.

    Returns the left-edge density and (j, j_p, j_p2) triple plus the
    right-edge equivalents.  These closed forms are what the plane-wave
    algebra gives exactly; building them from ``r`` and ``t`` rather
    than the stored probabilities keeps them sensitive to amplitude
    inconsistencies, which the residual checks exist to detect.
    """
    k = sol.k.per_meter
    k_bar = sol.k_bar.per_meter
    a = sol.barrier.a.meters
    b = sol.barrier.b.meters
    r_sq = abs(sol.r) ** 2
    t_sq = abs(sol.t) ** 2

    rho_a = abs(cmath.exp(1j * k * a) + sol.r * cmath.exp(-1j * k * a)) ** 2 / _TWO_PI
    left = (
        HBAR * k / ELECTRON_MASS * (1.0 - r_sq) / _TWO_PI,
        HBAR**2 * k**2 / ELECTRON_MASS * (1.0 + r_sq) / _TWO_PI,
        HBAR**3 * k**3 / ELECTRON_MASS * (1.0 - r_sq) / _TWO_PI,
    )
    rho_b = t_sq / _TWO_PI
    right = (
        HBAR * k_bar / ELECTRON_MASS * rho_b,
        HBAR**2 * k_bar**2 / ELECTRON_MASS * rho_b,
        HBAR**3 * k_bar**3 / ELECTRON_MASS * rho_b,
    )
    return rho_a, left, rho_b, right


def _step_heights(sol: ScatteringSolution) -> tuple[float, float]:
    """Potential steps (right minus left) at the two barrier edges of
    the profile the solution actually solves."""
    v0 = sol.barrier.V0.joules
    phi = sol.barrier.phi.joules
    step_b = -v0 if sol.tilted_interior else -(v0 + phi)
    return v0, step_b


def transferred_fluxes(sol: ScatteringSolution) -> TransferredFluxes:
    """Momentum and momentum-squared fluxes delivered to the wall at b.

    The rectangular families attribute the full right-edge step to the
    wall, which reduces the flux integrals to the interior currents at
    the right edge; those have closed forms in (k, k_bar, k0, T).  The
    tilted barrier splits its interior slope force evenly between the
    two electrodes on top of the full right-edge step, which turns the
    flux integrals into half-sums of the interior currents at the two
    edges; the interior values follow from the exterior ones through
    the step relations, a path that stays conditioned even when the
    barrier is nearly opaque.
    """
    k = sol.k.per_meter
    k_bar = sol.k_bar.per_meter
    k0 = sol.k0.per_meter

    if sol.barrier.family is not Family.LINEAR_FIELD:
        j_p_t = (
            HBAR**2
            / (2.0 * ELECTRON_MASS)
            * (k_bar**2 - k0**2)
            * (k / k_bar)
            * sol.T
            / _TWO_PI
        )
        j_p2_t = -(HBAR**3) / ELECTRON_MASS * k0**2 * k * sol.T / _TWO_PI
        return TransferredFluxes(
            j_p_t=j_p_t,
            j_p2_t=j_p2_t,
            v2_description=(
                "full right-edge step assigned to the wall; fluxes equal "
                "the interior currents at the right edge"
            ),
        )

    # Exterior values written through T rather than |r|^2: the model
    # satisfies T + R = 1 identically, and 1 - |r|^2 evaluated in floats
    # collapses to zero once T drops under rounding, which would leave
    # the two half-sum members unbalanced for very opaque barriers.
    # The edge densities are O(1)-conditioned and safe either way.
    a = sol.barrier.a.meters
    k_over_k_bar = k / k_bar
    j_const = HBAR * k / ELECTRON_MASS * sol.T / _TWO_PI
    rho_a = (
        abs(cmath.exp(1j * k * a) + sol.r * cmath.exp(-1j * k * a)) ** 2 / _TWO_PI
    )
    rho_b = k_over_k_bar * sol.T / _TWO_PI
    j_p_a = HBAR**2 * k**2 / ELECTRON_MASS * (2.0 - sol.T) / _TWO_PI
    j_p2_a = HBAR**3 * k**3 / ELECTRON_MASS * sol.T / _TWO_PI
    j_p_b = HBAR**2 * k_bar**2 / ELECTRON_MASS * rho_b
    j_p2_b = HBAR**3 * k_bar**3 / ELECTRON_MASS * rho_b
    step_a, step_b = _step_heights(sol)
    j_p_in_a = j_p_a - step_a * rho_a
    j_p_in_b = j_p_b + step_b * rho_b
    j_p2_in_a = j_p2_a - 2.0 * ELECTRON_MASS * j_const * step_a
    j_p2_in_b = j_p2_b + 2.0 * ELECTRON_MASS * j_const * step_b
    return TransferredFluxes(
        j_p_t=0.5 * (j_p_in_a + j_p_in_b),
        j_p2_t=0.5 * (j_p2_in_a + j_p2_in_b),
        v2_description=(
            "half the interior slope force assigned to each electrode "
            "plus the full right-edge step to the wall; fluxes are "
            "half-sums of the interior currents at the two edges"
        ),
    )


def jump_residuals(sol: ScatteringSolution) -> JumpResiduals:
    """Closure residuals of the step relations at both barrier edges.

    At each edge the momentum current must jump by ``-(step) * rho`` and
    the momentum-squared current by ``-2 m j (step)``.  The exterior
    sides use the closed plane-wave forms built from the amplitudes,
    the interior sides use the raw one-sided evaluation, so the check
    spans every layer of the solution.  Residuals are reported in
    natural flux units; large values are data about an inconsistent
    solution, not an error condition.
    """
    a = sol.barrier.a.meters
    b = sol.barrier.b.meters
    k = sol.k.per_meter
    k_bar = sol.k_bar.per_meter
    k0 = sol.k0.per_meter

    rho_a, (j_a, j_p_a, j_p2_a), rho_b, (j_b, j_p_b, j_p2_b) = (
        _amplitude_exterior_values(sol)
    )
    step_a, step_b = _step_heights(sol)
    inner_a = currents_at(sol, a, Side.RIGHT_LIMIT)
    inner_b = currents_at(sol, b, Side.LEFT_LIMIT)

    unit_p = (
        HBAR**2 / (2.0 * ELECTRON_MASS) * (k**2 + k0**2 + k_bar**2) / _TWO_PI
    )
    unit_p2 = (
        HBAR**3 / (2.0 * ELECTRON_MASS) * (k**3 + k0**3 + k_bar**3) / _TWO_PI
    )
    return JumpResiduals(
        momentum_left_edge=abs(inner_a.j_p - j_p_a + step_a * rho_a) / unit_p,
        momentum_right_edge=abs(j_p_b - inner_b.j_p + step_b * rho_b) / unit_p,
        momentum_sq_left_edge=abs(
            inner_a.j_p2 - j_p2_a + 2.0 * ELECTRON_MASS * j_a * step_a
        )
        / unit_p2,
        momentum_sq_right_edge=abs(
            j_p2_b - inner_b.j_p2 + 2.0 * ELECTRON_MASS * j_b * step_b
        )
        / unit_p2,
    )
