"""Airy functions Ai, Bi and first derivatives for real arguments.

The linear-field barrier solver needs all four values at accuracy near
machine precision, including deep into the exponential regime where Ai
underflows and Bi overflows.  Evaluation is split into three regimes:

* ``|z| <= 2``: Maclaurin series of the two fundamental ODE solutions,
  combined with the exact origin values.
* ``2 < |z| < 9``: Taylor-series marching of the Airy ODE ``w'' = z w``
  between precomputed half-integer anchors.  Each solution is carried
  only in its locally growing direction (Ai downward, Bi upward, both
  downward on the oscillatory side), which keeps the recurrence stable;
  a plain Maclaurin series run this far out loses 8+ digits to
  cancellation and the asymptotic series has not converged yet, so
  neither can bridge this band alone at the accuracy required here.
* ``|z| >= 9``: asymptotic expansions, exponential on the right and
  phase-modulated on the left, truncated at machine precision (the
  optimal truncation error at the seam is about e^{-2 zeta} ~ 1e-16).

Derivative values come from their own series in every regime, never
from differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RangeError

__all__ = [
    "AiryQuad",
    "airy_all",
    "airy_scaled",
]

# Exact origin values: Ai(0) = 3^(-2/3)/Gamma(2/3), -Ai'(0) = 3^(-1/3)/Gamma(1/3).
_C1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_C2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
_SQRT3 = math.sqrt(3.0)
_SQRTPI = math.sqrt(math.pi)

_MACLAURIN_EDGE = 2.0
_ASYMPTOTIC_EDGE = 9.0
_ANCHOR_STEP = 0.5
# Unscaled Bi overflows (and Ai underflows to subnormals) once the
# exponent (2/3) z^(3/2) passes ~700; refuse rather than return Inf/0.
_MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class AiryQuad:
    """Ai, Bi and first derivatives at one real argument."""

    ai: float
    ai_prime: float
    bi: float
    bi_prime: float
    argument: float

    @property
    def wronskian(self) -> float:
        """Ai*Bi' - Ai'*Bi; equals 1/pi for exact values (also when the
        quad carries e^{-+zeta}-scaled values, since the exponents cancel)."""
        return self.ai * self.bi_prime - self.ai_prime * self.bi


# --------------------------------------------------------------------------
# Maclaurin regime
# --------------------------------------------------------------------------


def _maclaurin_pair(z: float) -> tuple[float, float, float, float]:
    """The two fundamental solutions f, g of w'' = z w and their derivatives.

    f(0) = 1, f'(0) = 0 and g(0) = 0, g'(0) = 1; coefficients follow the
    ODE recurrence c_{n+3} = c_n / ((n+3)(n+2)).  Derivatives are the
    term-differentiated series, accumulated alongside.
    """
    if z == 0.0:
        return 1.0, 0.0, 0.0, 1.0
    f, fp = 1.0, 0.0
    g, gp = z, 1.0
    cf, cg = 1.0, 1.0
    z3 = z * z * z
    power_f = 1.0  # z^{3k}
    power_g = z  # z^{3k+1}
    for k in range(40):
        n_f = 3 * k
        n_g = 3 * k + 1
        cf = cf / ((n_f + 3) * (n_f + 2))
        cg = cg / ((n_g + 3) * (n_g + 2))
        power_f *= z3
        power_g *= z3
        term_f = cf * power_f
        term_g = cg * power_g
        f += term_f
        g += term_g
        fp += term_f * (n_f + 3) / z
        gp += term_g * (n_g + 3) / z
        if abs(term_f) < 1e-18 * abs(f) and abs(term_g) < 1e-18 * abs(g):
            break
    return f, fp, g, gp


def _airy_maclaurin(z: float) -> tuple[float, float, float, float]:
    f, fp, g, gp = _maclaurin_pair(z)
    ai = _C1 * f - _C2 * g
    aip = _C1 * fp - _C2 * gp
    bi = _SQRT3 * (_C1 * f + _C2 * g)
    bip = _SQRT3 * (_C1 * fp + _C2 * gp)
    return ai, aip, bi, bip


# --------------------------------------------------------------------------
# Taylor marching regime
# --------------------------------------------------------------------------


def _taylor_step(x0: float, w: float, wp: float, h: float) -> tuple[float, float]:
    """Advance w'' = x w from (x0, w, w') to x0 + h by a recentred series.

    Coefficients satisfy (n+2)(n+1) t_{n+2} = x0 t_n + t_{n-1}; for the
    step sizes used here (|h| <= 1/2, |x0| <= 9) the series reaches
    machine precision well inside the term cap.
    """
    t_nm1 = 0.0
    t_n = w
    t_np1 = wp
    sum_w = w
    sum_wp = wp
    hn = 1.0  # h^n for the w-sum at index n
    for n in range(60):
        t_np2 = (x0 * t_n + t_nm1) / ((n + 2) * (n + 1))
        hn *= h
        term_w = t_np1 * hn
        term_wp = (n + 2) * t_np2 * hn
        sum_w += term_w
        sum_wp += term_wp
        if abs(term_w) < 1e-17 * abs(sum_w) and abs(term_wp) < 1e-17 * abs(sum_wp):
            break
        t_nm1, t_n, t_np1 = t_n, t_np1, t_np2
    return sum_w, sum_wp


def _build_anchors() -> dict[float, tuple[float, float, float, float]]:
    """Half-integer anchor table on 2..9 and -9..-2.

    Bi marches upward and Ai downward on the positive side so each is
    carried in its growing (stable) direction; the oscillatory side is
    neutral and marches downward from the Maclaurin edge.
    """
    anchors: dict[float, list[float]] = {}
    n_steps = int(round((_ASYMPTOTIC_EDGE - _MACLAURIN_EDGE) / _ANCHOR_STEP))

    ai, aip, bi, bip = _airy_maclaurin(_MACLAURIN_EDGE)
    anchors[_MACLAURIN_EDGE] = [ai, aip, bi, bip]
    x = _MACLAURIN_EDGE
    for _ in range(n_steps):
        bi, bip = _taylor_step(x, bi, bip, _ANCHOR_STEP)
        x = round((x + _ANCHOR_STEP) * 2.0) / 2.0
        anchors[x] = [math.nan, math.nan, bi, bip]

    ai_s, aip_s, _, _, zeta = _airy_asymptotic_positive(_ASYMPTOTIC_EDGE)
    damp = math.exp(-zeta)
    ai, aip = ai_s * damp, aip_s * damp
    anchors[_ASYMPTOTIC_EDGE][0] = ai
    anchors[_ASYMPTOTIC_EDGE][1] = aip
    x = _ASYMPTOTIC_EDGE
    for _ in range(n_steps):
        ai, aip = _taylor_step(x, ai, aip, -_ANCHOR_STEP)
        x = round((x - _ANCHOR_STEP) * 2.0) / 2.0
        if x == _MACLAURIN_EDGE:
            break
        anchors[x][0] = ai
        anchors[x][1] = aip

    ai, aip, bi, bip = _airy_maclaurin(-_MACLAURIN_EDGE)
    anchors[-_MACLAURIN_EDGE] = [ai, aip, bi, bip]
    x = -_MACLAURIN_EDGE
    for _ in range(n_steps):
        ai, aip = _taylor_step(x, ai, aip, -_ANCHOR_STEP)
        bi, bip = _taylor_step(x, bi, bip, -_ANCHOR_STEP)
        x = round((x - _ANCHOR_STEP) * 2.0) / 2.0
        anchors[x] = [ai, aip, bi, bip]

    return {k: tuple(v) for k, v in anchors.items()}


_ANCHORS: dict[float, tuple[float, float, float, float]] | None = None


def _airy_marched(z: float) -> tuple[float, float, float, float]:
    global _ANCHORS
    if _ANCHORS is None:
        _ANCHORS = _build_anchors()
    anchor = round(z / _ANCHOR_STEP) * _ANCHOR_STEP
    anchor = min(max(anchor, -_ASYMPTOTIC_EDGE), _ASYMPTOTIC_EDGE)
    if abs(anchor) < _MACLAURIN_EDGE:
        anchor = math.copysign(_MACLAURIN_EDGE, z)
    ai0, aip0, bi0, bip0 = _ANCHORS[anchor]
    h = z - anchor
    ai, aip = _taylor_step(anchor, ai0, aip0, h)
    bi, bip = _taylor_step(anchor, bi0, bip0, h)
    return ai, aip, bi, bip


# --------------------------------------------------------------------------
# Asymptotic regime
# --------------------------------------------------------------------------


def _asymptotic_sums(inv_zeta: float, phase_form: bool) -> tuple[float, ...]:
    """Truncated u/v asymptotic sums.

    u_0 = v_0 = 1, u_{k+1} = u_k (6k+1)(6k+5) / (72(k+1)),
    v_k = u_k (6k+1)/(1-6k).  For the exponential regime returns the four
    alternating/plain sums; for the phase regime returns the even and odd
    partial sums of both families.  Terms are added until they stop
    shrinking (optimal truncation) or fall below machine precision.
    """
    u_k = 1.0
    terms_u = [1.0]
    terms_v = [1.0]
    k = 0
    power = 1.0
    while True:
        u_next = u_k * (6 * k + 1) * (6 * k + 5) / (72.0 * (k + 1))
        k += 1
        power *= inv_zeta
        term_u = u_next * power
        v_k1 = u_next * (6 * k + 1) / (1 - 6 * k)
        term_v = v_k1 * power
        if abs(term_u) >= abs(terms_u[-1]) and k > 2:
            break
        terms_u.append(term_u)
        terms_v.append(term_v)
        u_k = u_next
        if abs(term_u) < 1e-18 and abs(term_v) < 1e-18:
            break
        if k > 40:
            break

    if not phase_form:
        s_u_alt = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_u))
        s_v_alt = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_v))
        s_u = sum(terms_u)
        s_v = sum(terms_v)
        return s_u_alt, s_v_alt, s_u, s_v

    # Phase regime: even-index and odd-index sums with alternating signs
    # inside each parity class.
    u_even = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_u[0::2]))
    u_odd = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_u[1::2]))
    v_even = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_v[0::2]))
    v_odd = sum(t if i % 2 == 0 else -t for i, t in enumerate(terms_v[1::2]))
    return u_even, u_odd, v_even, v_odd


def _airy_asymptotic_positive(z: float) -> tuple[float, float, float, float, float]:
    """(Ai e^zeta, Ai' e^zeta, Bi e^-zeta, Bi' e^-zeta, zeta) for z >= 9."""
    rz = math.sqrt(z)
    zeta = (2.0 / 3.0) * z * rz
    z14 = math.sqrt(rz)
    s_u_alt, s_v_alt, s_u, s_v = _asymptotic_sums(1.0 / zeta, phase_form=False)
    ai_s = s_u_alt / (2.0 * _SQRTPI * z14)
    aip_s = -z14 * s_v_alt / (2.0 * _SQRTPI)
    bi_s = s_u / (_SQRTPI * z14)
    bip_s = z14 * s_v / _SQRTPI
    return ai_s, aip_s, bi_s, bip_s, zeta


def _airy_asymptotic_negative(z: float) -> tuple[float, float, float, float]:
    """Phase-form expansions for z <= -9."""
    x = -z
    rx = math.sqrt(x)
    xi = (2.0 / 3.0) * x * rx
    x14 = math.sqrt(rx)
    u_even, u_odd, v_even, v_odd = _asymptotic_sums(1.0 / xi, phase_form=True)
    c = math.cos(xi - 0.25 * math.pi)
    s = math.sin(xi - 0.25 * math.pi)
    ai = (c * u_even + s * u_odd) / (_SQRTPI * x14)
    aip = x14 * (s * v_even - c * v_odd) / _SQRTPI
    bi = (-s * u_even + c * u_odd) / (_SQRTPI * x14)
    bip = x14 * (c * v_even + s * v_odd) / _SQRTPI
    return ai, aip, bi, bip


# --------------------------------------------------------------------------
# Public API
# --------------------------------------------------------------------------


def airy_all(z: float) -> AiryQuad:
    """Ai(z), Ai'(z), Bi(z), Bi'(z) at a real argument.

    Accuracy is ~1e-13 relative (to the oscillation envelope on the
    negative axis) for |z| <= 10 and 1e-10 beyond.  Arguments whose
    exponent (2/3) z^(3/2) exceeds 700 would overflow Bi in unscaled
    arithmetic and raise a range error; use :func:`airy_scaled` there.
    """
    if not math.isfinite(z):
        raise DomainError(f"Airy argument must be finite, got {z}")
    if abs(z) <= _MACLAURIN_EDGE:
        vals = _airy_maclaurin(z)
    elif abs(z) < _ASYMPTOTIC_EDGE:
        vals = _airy_marched(z)
    elif z >= _ASYMPTOTIC_EDGE:
        ai_s, aip_s, bi_s, bip_s, zeta = _airy_asymptotic_positive(z)
        if zeta > _MAX_EXPONENT:
            raise RangeError(
                f"unscaled Airy values overflow: exponent (2/3) z^(3/2) = "
                f"{zeta:.6g} at z = {z:.6g} exceeds {_MAX_EXPONENT:.0f}; "
                "use airy_scaled"
            )
        grow = math.exp(zeta)
        vals = (ai_s / grow, aip_s / grow, bi_s * grow, bip_s * grow)
    else:
        vals = _airy_asymptotic_negative(z)
    return AiryQuad(*vals, argument=z)


def airy_scaled(z: float) -> tuple[AiryQuad, float]:
    """Overflow-safe scaled Airy values for z > 0.

    Returns ``(quad, zeta)`` with ``zeta = (2/3) z^(3/2)`` and the quad
    holding ``Ai e^{+zeta}, Ai' e^{+zeta}, Bi e^{-zeta}, Bi' e^{-zeta}``.
    The Wronskian of the scaled quad still equals 1/pi because the two
    exponents cancel.  Valid at arbitrarily large z; recombination with
    e^{-+zeta} reproduces :func:`airy_all` wherever both representable.
    """
    if not (math.isfinite(z) and z > 0.0):
        raise DomainError(f"scaled Airy evaluation needs finite z > 0, got {z}")
    if z >= _ASYMPTOTIC_EDGE:
        ai_s, aip_s, bi_s, bip_s, zeta = _airy_asymptotic_positive(z)
        return AiryQuad(ai_s, aip_s, bi_s, bip_s, argument=z), zeta
    quad = airy_all(z)
    zeta = (2.0 / 3.0) * z * math.sqrt(z)
    grow = math.exp(zeta)
    return (
        AiryQuad(
            quad.ai * grow,
            quad.ai_prime * grow,
            quad.bi / grow,
            quad.bi_prime / grow,
            argument=z,
        ),
        zeta,
    )
