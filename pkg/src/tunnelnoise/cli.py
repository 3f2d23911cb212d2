"""Command-line front end.

Subcommands
-----------
``sweep``        Parameter sweep over bias, gap, or energy; CSV or JSON.
``feasibility``  Noise-budget report with a PASS/FAIL verdict.
``solve``        Full single-point dump (JSON).
``selftest``     Deterministic invariant checks; nonzero exit on failure.

Configuration comes from flags, optionally seeded by a plain ``key=value``
file (``--config``); explicit flags override file entries.  All output is
deterministic: no timestamps, fixed formatting (12 significant digits in
CSV, shortest round-trip floats in JSON), fixed key ordering.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 internal
consistency failure (including selftest failures).
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import sys
from dataclasses import dataclass

from .airy import airy_all
from .errors import ConsistencyError, DomainError, UsageError
from .fluxes import jump_residuals, transferred_fluxes
from .noise import (
    ResonatorSpec,
    noise_budget,
    shot_noise_current_psd,
)
from .scattering import BarrierSpec, Family, solve
from .uncertainty import (
    DerivativeMethod,
    dT_dl,
    momentum_uncertainty,
    position_uncertainty,
)
from .units import HBAR, Energy

__all__ = [
    "SweepVariable",
    "OutputFormat",
    "SweepConfig",
    "SweepRow",
    "run_sweep",
    "feasibility_report",
    "main",
]

_FAMILIES = {
    "sym": Family.SYMMETRIC_RECT,
    "asym": Family.ASYMMETRIC_RECT,
    "field": Family.LINEAR_FIELD,
}
_ALL_COLUMNS = ("T", "R", "delta_l", "delta_p", "product", "s_fq")
_UNIT_LABELS = {
    "phi": "eV",
    "gap": "nm",
    "E": "eV",
    "T": "dimensionless",
    "R": "dimensionless",
    "delta_l": "nm",
    "delta_p": "kg*m/s",
    "product": "hbar",
    "s_fq": "N^2/Hz",
}


class SweepVariable(enum.Enum):
    BIAS_PHI = "phi"
    GAP = "gap"
    ENERGY = "E"


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep request.

    ``outputs`` is the ordered tuple of requested columns (subset of
    T, R, delta_l, delta_p, product, s_fq); the swept variable's value
    column is always emitted first.
    """

    family: Family
    v0_ev: float
    e_ev: float
    phi_ev: float
    gap_nm: float
    variable: SweepVariable
    minimum: float
    maximum: float
    steps: int
    outputs: tuple[str, ...]
    n_electrons: float
    i0_a: float
    fmt: OutputFormat
    out_path: "str | None"

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise UsageError(f"steps must be >= 2, got {self.steps}")
        if not (self.minimum < self.maximum):
            raise UsageError(
                f"min must be below max, got min={self.minimum!r} max={self.maximum!r}"
            )
        unknown = [c for c in self.outputs if c not in _ALL_COLUMNS]
        if unknown:
            raise UsageError(
                f"unknown columns {unknown!r}; available: {', '.join(_ALL_COLUMNS)}"
            )
        if "s_fq" in self.outputs and self.family is not Family.SYMMETRIC_RECT:
            raise UsageError(
                "the s_fq column needs the symmetric barrier (--barrier sym)"
            )
        if self.n_electrons < 1.0 or not math.isfinite(self.n_electrons):
            raise UsageError(f"N must be a finite count >= 1, got {self.n_electrons!r}")
        if self.variable is SweepVariable.BIAS_PHI:
            if self.family is Family.SYMMETRIC_RECT:
                raise UsageError(
                    "a phi sweep needs a biased family (--barrier asym or field); "
                    "the symmetric barrier has no bias parameter"
                )
            if self.minimum < 0.0:
                raise UsageError(f"phi sweep min must be >= 0, got {self.minimum!r}")
        elif self.variable is SweepVariable.GAP:
            if self.minimum <= 0.0:
                raise UsageError(f"gap sweep min must be > 0, got {self.minimum!r}")
        elif self.variable is SweepVariable.ENERGY:
            if self.minimum <= 0.0:
                raise UsageError(f"E sweep min must be > 0, got {self.minimum!r}")
            if self.maximum >= self.v0_ev:
                raise UsageError(
                    f"E sweep max must stay below V0={self.v0_ev!r} eV, "
                    f"got {self.maximum!r}"
                )


@dataclass(frozen=True)
class SweepRow:
    """One grid point: swept value plus the requested columns."""

    value: float
    columns: dict


def _grid(config: SweepConfig) -> list:
    span = config.maximum - config.minimum
    last = config.steps - 1
    return [config.minimum + span * i / last for i in range(config.steps)]


def _spec_at(config: SweepConfig, value: float) -> BarrierSpec:
    phi = config.phi_ev
    gap = config.gap_nm
    if config.variable is SweepVariable.BIAS_PHI:
        phi = value
    elif config.variable is SweepVariable.GAP:
        gap = value
    if config.family is Family.SYMMETRIC_RECT:
        return BarrierSpec.symmetric(config.v0_ev, gap)
    if config.family is Family.ASYMMETRIC_RECT:
        return BarrierSpec.asymmetric(config.v0_ev, phi, gap)
    return BarrierSpec.linear_field(config.v0_ev, phi, gap)


def _energy_at(config: SweepConfig, value: float) -> Energy:
    if config.variable is SweepVariable.ENERGY:
        return Energy.from_ev(value)
    return Energy.from_ev(config.e_ev)


def _point_values(config: SweepConfig, value: float) -> dict:
    """Every supported column at one grid point, in documented units."""
    spec = _spec_at(config, value)
    energy = _energy_at(config, value)
    sol = solve(energy, spec)
    derivative = dT_dl(sol, DerivativeMethod.ANALYTIC)
    delta_l = position_uncertainty(sol, derivative, config.n_electrons)
    delta_p = momentum_uncertainty(
        transferred_fluxes(sol), sol, config.n_electrons
    )
    values = {
        "T": sol.T,
        "R": sol.R,
        "delta_l": delta_l.nm,
        "delta_p": delta_p,
        "product": delta_l.meters * delta_p / HBAR,
    }
    if "s_fq" in config.outputs:
        from .noise import quantum_force_psd

        values["s_fq"] = quantum_force_psd(config.i0_a, energy, spec)
    return values


def _point_columns(config: SweepConfig, value: float) -> dict:
    values = _point_values(config, value)
    row = {name: values[name] for name in config.outputs}
    for name, column_value in row.items():
        if not math.isfinite(column_value):
            raise DomainError(f"column {name} is not finite at {value!r}")
    return row


def _zero_bias_product(config: SweepConfig) -> float:
    zero_bias = SweepConfig(
        family=config.family,
        v0_ev=config.v0_ev,
        e_ev=config.e_ev,
        phi_ev=0.0,
        gap_nm=config.gap_nm,
        variable=SweepVariable.GAP,
        minimum=config.gap_nm,
        maximum=config.gap_nm * 2.0,
        steps=2,
        outputs=("product",),
        n_electrons=config.n_electrons,
        i0_a=config.i0_a,
        fmt=config.fmt,
        out_path=None,
    )
    return _point_columns(zero_bias, config.gap_nm)["product"]


def run_sweep(config: SweepConfig) -> tuple:
    """Evaluate the grid; returns (rows, summary).

    Grid points whose evaluation hits a domain error are omitted and
    counted in ``summary["skipped_rows"]``; bias sweeps additionally
    report nondecreasing verdicts for delta_p and the product, plus the
    zero-bias product value.
    """
    rows = []
    kicks = []
    products = []
    skipped = 0
    for value in _grid(config):
        try:
            values = _point_values(config, value)
            row = {name: values[name] for name in config.outputs}
            for name, column_value in row.items():
                if not math.isfinite(column_value):
                    raise DomainError(f"column {name} is not finite at {value!r}")
        except DomainError:
            skipped += 1
            continue
        rows.append(SweepRow(value=value, columns=row))
        kicks.append(values["delta_p"])
        products.append(values["product"])
    summary = {"skipped_rows": skipped}
    if config.variable is SweepVariable.BIAS_PHI:
        summary["delta_p_nondecreasing"] = all(
            b >= a for a, b in zip(kicks, kicks[1:])
        )
        summary["product_nondecreasing"] = all(
            b >= a for a, b in zip(products, products[1:])
        )
        summary["zero_bias_product_hbar"] = _zero_bias_product(config)
    return rows, summary


def _format_csv(config: SweepConfig, rows, summary) -> str:
    var_name = config.variable.value
    header = [var_name, *config.outputs]
    units = [_UNIT_LABELS[name] for name in header]
    lines = [",".join(header), "# units: " + ",".join(units)]
    for row in rows:
        cells = [f"{row.value:.11e}"] + [
            f"{row.columns[name]:.11e}" for name in config.outputs
        ]
        lines.append(",".join(cells))
    lines.append(f"# skipped_rows: {summary['skipped_rows']}")
    if "delta_p_nondecreasing" in summary:
        lines.append(
            "# delta_p_nondecreasing: "
            + ("true" if summary["delta_p_nondecreasing"] else "false")
        )
        lines.append(
            "# product_nondecreasing: "
            + ("true" if summary["product_nondecreasing"] else "false")
        )
        lines.append(
            f"# zero_bias_product_hbar: {summary['zero_bias_product_hbar']:.11e}"
        )
    return "\n".join(lines) + "\n"


def _format_json(config: SweepConfig, rows, summary) -> str:
    var_name = config.variable.value
    payload = {
        "config": {
            "barrier": config.family.value,
            "V0_ev": config.v0_ev,
            "E_ev": config.e_ev,
            "phi_ev": config.phi_ev,
            "gap_nm": config.gap_nm,
            "sweep": var_name,
            "min": config.minimum,
            "max": config.maximum,
            "steps": config.steps,
            "columns": list(config.outputs),
            "N": config.n_electrons,
            "I0_a": config.i0_a,
            "units": {name: _UNIT_LABELS[name] for name in (var_name, *config.outputs)},
        },
        "rows": [{var_name: row.value, **row.columns} for row in rows],
        "summary": summary,
    }
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out_path: "str | None") -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def feasibility_report(
    i0_a: float,
    resonator: ResonatorSpec,
    barrier: BarrierSpec,
    energy: Energy,
    fmt: "OutputFormat | None" = None,
) -> str:
    """Text (or JSON) noise-budget report with the dominance verdict."""
    budget = noise_budget(i0_a, resonator, energy, barrier)
    lhs = budget.feasibility_lhs
    if lhs < 1.0:
        verdict = "PASS (quantum force noise dominates the thermal floor)"
    elif lhs > 1.0:
        verdict = "FAIL (thermal floor exceeds the quantum force noise)"
    else:
        verdict = "AT THRESHOLD (normalized parameter product equals 1)"
    if fmt is OutputFormat.JSON:
        payload = {
            "I0_a": budget.tunnel_current,
            "electron_energy_ev": budget.electron_energy,
            "barrier": {
                "family": barrier.family.value,
                "V0_ev": barrier.V0.ev,
                "phi_ev": barrier.phi.ev,
                "gap_nm": barrier.gap.nm,
            },
            "resonator": {
                "mass_kg": resonator.mass,
                "f0_hz": resonator.f0,
                "quality": resonator.quality,
                "temperature_k": resonator.temperature,
            },
            "s_fq_n2_per_hz": budget.s_fq,
            "s_fl_n2_per_hz": budget.s_fl,
            "psd_ratio": budget.psd_ratio,
            "feasibility_lhs": budget.feasibility_lhs,
            "shot_psd_a_per_rthz": budget.shot_psd,
            "verdict": verdict.split(" ")[0],
        }
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    lines = [
        f"tunnel current I0:        {budget.tunnel_current:.11e} A",
        f"electron energy E:        {budget.electron_energy:.11e} eV",
        (
            f"barrier:                  {barrier.family.value} "
            f"V0={barrier.V0.ev:.11e} eV phi={barrier.phi.ev:.11e} eV "
            f"gap={barrier.gap.nm:.11e} nm"
        ),
        (
            f"resonator:                mass={resonator.mass:.11e} kg "
            f"f0={resonator.f0:.11e} Hz Q={resonator.quality:.11e} "
            f"temp={resonator.temperature:.11e} K"
        ),
        f"quantum force PSD S_fQ:   {budget.s_fq:.11e} N^2/Hz (single-sided)",
        f"thermal force PSD S_fL:   {budget.s_fl:.11e} N^2/Hz (single-sided)",
        f"PSD ratio S_fL/S_fQ:      {budget.psd_ratio:.11e}",
        f"feasibility_lhs:          {budget.feasibility_lhs:.11e}",
        f"shot-noise current PSD:   {budget.shot_psd:.11e} A/sqrt(Hz)",
        f"verdict:                  {verdict}",
    ]
    return "\n".join(lines) + "\n"


def _complex_json(value: complex) -> dict:
    def clean(x: float):
        return x if math.isfinite(x) else repr(x)

    return {"re": clean(value.real), "im": clean(value.imag)}


def _solve_dump(
    barrier: BarrierSpec, energy: Energy, n_electrons: float, i0_a: float
) -> str:
    sol = solve(energy, barrier)
    derivative = dT_dl(sol, DerivativeMethod.ANALYTIC)
    transferred = transferred_fluxes(sol)
    residuals = jump_residuals(sol)
    payload = {
        "barrier": {
            "family": barrier.family.value,
            "V0_ev": barrier.V0.ev,
            "phi_ev": barrier.phi.ev,
            "gap_nm": barrier.gap.nm,
            "a_nm": barrier.a.nm,
        },
        "energy_ev": energy.ev,
        "wavenumbers_per_m": {
            "k": sol.k.per_meter,
            "k0": sol.k0.per_meter,
            "k_bar": sol.k_bar.per_meter,
        },
        "amplitudes": {
            "t": _complex_json(sol.t),
            "r": _complex_json(sol.r),
            "c_plus": _complex_json(sol.c_plus),
            "c_minus": _complex_json(sol.c_minus),
        },
        "probabilities": {
            "T": sol.T,
            "R": sol.R,
            "unitarity_defect": sol.T + sol.R - 1.0,
        },
        "incident_flux": sol.incident_flux,
        "transferred_fluxes": {
            "j_p_t": transferred.j_p_t,
            "j_p2_t": transferred.j_p2_t,
            "v2_description": transferred.v2_description,
        },
        "jump_residuals": {
            "momentum_left_edge": residuals.momentum_left_edge,
            "momentum_right_edge": residuals.momentum_right_edge,
            "momentum_sq_left_edge": residuals.momentum_sq_left_edge,
            "momentum_sq_right_edge": residuals.momentum_sq_right_edge,
            "worst": residuals.worst,
        },
        "dT_dl_per_m": derivative,
        "dT_dl_method": "analytic",
        "n_electrons": n_electrons,
    }
    try:
        delta_l = position_uncertainty(sol, derivative, n_electrons)
        delta_p = momentum_uncertainty(transferred, sol, n_electrons)
        payload["uncertainty"] = {
            "delta_l_nm": delta_l.nm,
            "delta_p_kg_m_s": delta_p,
            "product_over_hbar": delta_l.meters * delta_p / HBAR,
        }
    except DomainError as exc:
        payload["uncertainty"] = {"unavailable": str(exc)}
    if barrier.family is Family.SYMMETRIC_RECT:
        from .noise import quantum_force_psd

        payload["s_fq_n2_per_hz"] = quantum_force_psd(i0_a, energy, barrier)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------- selftest


def _selftest() -> int:
    checks = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append(ok)
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)

    cases = [
        (BarrierSpec.symmetric(5.0, 0.5), 1.0),
        (BarrierSpec.asymmetric(4.0, 1.5, 0.3), 1.2),
        (BarrierSpec.linear_field(5.0, 2.0, 0.5), 1.0),
    ]
    worst_unitarity = max(
        abs(solve(Energy.from_ev(e), spec).T + solve(Energy.from_ev(e), spec).R - 1.0)
        for spec, e in cases
    )
    check(
        "unitarity T+R=1 within 1e-10",
        worst_unitarity < 1e-10,
        f"defect {worst_unitarity:.3e}",
    )

    sol = solve(Energy.from_ev(1.0), BarrierSpec.symmetric(5.0, 0.5))
    derivative = dT_dl(sol, DerivativeMethod.ANALYTIC)
    delta_l = position_uncertainty(sol, derivative, 1.0)
    delta_p = momentum_uncertainty(transferred_fluxes(sol), sol, 1.0)
    product = delta_l.meters * delta_p / HBAR
    check(
        "symmetric uncertainty product equals 1/2 within 1e-10",
        abs(product - 0.5) < 1e-10,
        f"product {product!r}",
    )

    try:
        tilted = solve(Energy.from_ev(1.0), BarrierSpec.linear_field(4.0, 1.2, 0.4))
        dT_dl(tilted, DerivativeMethod.BOTH)
        check("analytic and numeric transmission derivatives agree", True)
    except ConsistencyError as exc:
        check("analytic and numeric transmission derivatives agree", False, str(exc))

    worst_jump = jump_residuals(tilted).worst
    check(
        "edge jump relations close within 1e-9",
        worst_jump < 1e-9,
        f"worst {worst_jump:.3e}",
    )

    worst_wronskian = max(
        abs(
            (lambda q: q.ai * q.bi_prime - q.ai_prime * q.bi)(airy_all(z))
            - 1.0 / math.pi
        )
        for z in (-20.0, -5.0, 0.0, 2.0, 8.0, 30.0)
    )
    check(
        "Airy Wronskian equals 1/pi within 1e-10",
        worst_wronskian < 1e-10,
        f"defect {worst_wronskian:.3e}",
    )

    from .noise import feasibility_lhs as lhs_fn

    nominal = ResonatorSpec(mass=1e-10, f0=1e5, quality=1e7, temperature=0.01)
    lhs = lhs_fn(1e-6, nominal)
    check("feasibility normalization is unity at nominal", abs(lhs - 1.0) < 1e-12)

    shot = shot_noise_current_psd(1e-6)
    check(
        "shot noise at 1 uA rounds to 5.7e-13 A/sqrt(Hz)",
        round(shot * 1e13, 1) == 5.7,
        f"value {shot:.4e}",
    )

    zero_bias = solve(Energy.from_ev(1.0), BarrierSpec.linear_field(5.0, 1e-6, 1.0))
    d0 = dT_dl(zero_bias, DerivativeMethod.ANALYTIC)
    l0 = position_uncertainty(zero_bias, d0, 1.0)
    p0 = momentum_uncertainty(transferred_fluxes(zero_bias), zero_bias, 1.0)
    product0 = l0.meters * p0 / HBAR
    check(
        "vanishing-bias product matches 1/2 within 1e-4",
        abs(product0 - 0.5) < 1e-4,
        f"product {product0!r}",
    )

    return 0 if all(checks) else 4


# ------------------------------------------------------------ arg parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunnelnoise",
        description=(
            "Quantum-measurement noise of a vacuum-tunneling position "
            "transducer: scattering sweeps, uncertainty pairs, and noise "
            "budgets."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value file; flags override entries")
        p.add_argument("--barrier", choices=sorted(_FAMILIES))
        p.add_argument("--V0", type=float, help="barrier height, eV")
        p.add_argument("--E", type=float, help="electron energy, eV")
        p.add_argument("--phi", type=float, help="bias drop across the gap, eV")
        p.add_argument("--gap", type=float, help="electrode separation, nm")

    sweep = sub.add_parser("sweep", help="grid sweep to CSV or JSON")
    add_common(sweep)
    sweep.add_argument("--sweep", choices=[v.value for v in SweepVariable])
    sweep.add_argument("--min", type=float)
    sweep.add_argument("--max", type=float)
    sweep.add_argument("--steps", type=int)
    sweep.add_argument("--N", type=float, help="electron count per batch")
    sweep.add_argument("--I0", type=float, help="tunnel current for s_fq, A")
    sweep.add_argument(
        "--columns", help="comma-separated subset of " + ",".join(_ALL_COLUMNS)
    )
    sweep.add_argument("--out", help="output path (default stdout)")
    sweep.add_argument("--format", choices=[f.value for f in OutputFormat])

    feas = sub.add_parser("feasibility", help="noise budget with verdict")
    add_common(feas)
    feas.add_argument("--I0", type=float, help="tunnel current, A")
    feas.add_argument("--mass", type=float, help="resonator mass, kg")
    feas.add_argument("--temp", type=float, help="bath temperature, K")
    feas.add_argument("--f0", type=float, help="resonance frequency, Hz")
    feas.add_argument("--Q", type=float, help="quality factor")
    feas.add_argument("--out", help="output path (default stdout)")
    feas.add_argument("--format", choices=[OutputFormat.JSON.value])

    solve_p = sub.add_parser("solve", help="single-point JSON dump")
    add_common(solve_p)
    solve_p.add_argument("--N", type=float, help="electron count per batch")
    solve_p.add_argument("--I0", type=float, help="tunnel current for s_fq, A")
    solve_p.add_argument("--out", help="output path (default stdout)")

    sub.add_parser("selftest", help="run deterministic invariant checks")
    return parser


def _read_config_file(path: str) -> dict:
    entries = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            content = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from None
    for line_no, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(
                f"config file {path!r} line {line_no}: expected key=value, got {raw!r}"
            )
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return entries


_CONFIG_CONVERTERS = {
    "barrier": str,
    "V0": float,
    "E": float,
    "phi": float,
    "gap": float,
    "sweep": str,
    "min": float,
    "max": float,
    "steps": int,
    "N": float,
    "I0": float,
    "mass": float,
    "temp": float,
    "f0": float,
    "Q": float,
    "columns": str,
    "out": str,
    "format": str,
}


def _merged(args: argparse.Namespace, name: str, fallback):
    """Flag value if given, else config-file entry, else fallback."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    entries = getattr(args, "_config_entries", {})
    if name in entries:
        converter = _CONFIG_CONVERTERS[name]
        try:
            return converter(entries[name])
        except ValueError:
            raise UsageError(
                f"config entry {name}={entries[name]!r} is not a valid "
                f"{converter.__name__}"
            ) from None
    return fallback


def _load_config_entries(args: argparse.Namespace) -> None:
    entries = {}
    if getattr(args, "config", None):
        entries = _read_config_file(args.config)
        unknown = set(entries) - set(_CONFIG_CONVERTERS)
        if unknown:
            raise UsageError(
                f"unknown config keys {sorted(unknown)!r}; known keys: "
                f"{sorted(_CONFIG_CONVERTERS)}"
            )
    args._config_entries = entries


def _barrier_from(args: argparse.Namespace, default_family: str) -> BarrierSpec:
    family_name = _merged(args, "barrier", default_family)
    if family_name not in _FAMILIES:
        raise UsageError(
            f"unknown barrier family {family_name!r}; choose from "
            f"{sorted(_FAMILIES)}"
        )
    family = _FAMILIES[family_name]
    v0 = _merged(args, "V0", 5.0)
    phi = _merged(args, "phi", 0.0)
    gap = _merged(args, "gap", 0.5)
    if family is Family.SYMMETRIC_RECT:
        return BarrierSpec.symmetric(v0, gap)
    if family is Family.ASYMMETRIC_RECT:
        return BarrierSpec.asymmetric(v0, phi, gap)
    return BarrierSpec.linear_field(v0, phi, gap)


def _cmd_sweep(args: argparse.Namespace) -> int:
    family_name = _merged(args, "barrier", "field")
    if family_name not in _FAMILIES:
        raise UsageError(
            f"unknown barrier family {family_name!r}; choose from "
            f"{sorted(_FAMILIES)}"
        )
    family = _FAMILIES[family_name]
    variable = SweepVariable(_merged(args, "sweep", "phi"))
    default_columns = "T,R,delta_l,delta_p,product"
    columns_raw = _merged(args, "columns", default_columns)
    outputs = tuple(
        name.strip() for name in columns_raw.split(",") if name.strip()
    )
    if not outputs:
        raise UsageError("columns must name at least one output")
    defaults_min, defaults_max = {
        SweepVariable.BIAS_PHI: (0.0, 5.0),
        SweepVariable.GAP: (0.1, 2.0),
        SweepVariable.ENERGY: (0.2, 4.5),
    }[variable]
    config = SweepConfig(
        family=family,
        v0_ev=_merged(args, "V0", 5.0),
        e_ev=_merged(args, "E", 1.0),
        phi_ev=_merged(args, "phi", 0.0),
        gap_nm=_merged(args, "gap", 0.5),
        variable=variable,
        minimum=_merged(args, "min", defaults_min),
        maximum=_merged(args, "max", defaults_max),
        steps=_merged(args, "steps", 200),
        outputs=outputs,
        n_electrons=_merged(args, "N", 1.0),
        i0_a=_merged(args, "I0", 1e-6),
        fmt=OutputFormat(_merged(args, "format", "csv")),
        out_path=_merged(args, "out", None),
    )
    rows, summary = run_sweep(config)
    if config.fmt is OutputFormat.CSV:
        text = _format_csv(config, rows, summary)
    else:
        text = _format_json(config, rows, summary)
    _emit(text, config.out_path)
    return 0


def _cmd_feasibility(args: argparse.Namespace) -> int:
    resonator = ResonatorSpec(
        mass=_merged(args, "mass", 1e-10),
        f0=_merged(args, "f0", 1e5),
        quality=_merged(args, "Q", 1e7),
        temperature=_merged(args, "temp", 0.01),
    )
    barrier = _barrier_from(args, "sym")
    energy = Energy.from_ev(_merged(args, "E", 1.0))
    fmt_raw = _merged(args, "format", None)
    fmt = OutputFormat(fmt_raw) if fmt_raw else None
    text = feasibility_report(
        _merged(args, "I0", 1e-6), resonator, barrier, energy, fmt
    )
    _emit(text, _merged(args, "out", None))
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    barrier = _barrier_from(args, "sym")
    energy = Energy.from_ev(_merged(args, "E", 1.0))
    text = _solve_dump(
        barrier, energy, _merged(args, "N", 1.0), _merged(args, "I0", 1e-6)
    )
    _emit(text, _merged(args, "out", None))
    return 0


def main(argv: "list[str] | None" = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config_entries(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "feasibility":
            return _cmd_feasibility(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _selftest()
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
