"""``dipdeco`` command-line front end.

Subcommands::

    dipdeco rate     --config scenario.txt [--distribution mb] [--enforce-budget [HZ]]
    dipdeco sweep    --config scenario.txt [--jobs 4] [--format json]
    dipdeco table1   [--field 1.8e5 | --d1 1e-23 --radius 1e-6]
    dipdeco validate
    dipdeco preset   fig2|fig3|fig4|table1

Exit codes: 0 success, 2 configuration error, 3 regime error, 4 numeric
error, 5 rate above budget (only with ``--enforce-budget``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .config import Model, ScenarioConfig, load_config, parse_config, preset_text
from .errors import ConfigError, DomainError, NumericError, RegimeError
from .qgem import (
    POLARIZABLE_SPECIES,
    builtin_species_catalog,
    induced_environment_dipole,
    max_crystal_dipole,
    permanent_dipole_field,
)
from .quantities import ANGSTROM3
from .rates import (
    RateResult,
    Regime,
    classify_regime,
    gamma_generic,
    gamma_long,
    gamma_short,
    gamma_short_approx,
)
from .special import DistributionKind

EXIT_OK, EXIT_CONFIG, EXIT_REGIME, EXIT_NUMERIC, EXIT_BUDGET = 0, 2, 3, 4, 5

RATE_COLUMNS = ("gamma_Hz", "regime", "coherence_time_s", "d1_Cm", "d2_Cm", "n_m3", "p_bar", "lambda0_m", "a")


def evaluate(cfg: ScenarioConfig) -> RateResult:
    """Rate for ``cfg`` with its configured model."""
    ctx, env = cfg.context, cfg.environment
    dist = cfg.momentum_distribution()
    model = cfg.model
    if model is Model.AUTO:
        regime = classify_regime(env, cfg.superposition)
        model = {Regime.SHORT: Model.SHORT, Regime.LONG: Model.LONG}.get(regime, Model.GENERIC)
    if model is Model.SHORT:
        return gamma_short(ctx, env, dist)
    if model is Model.SHORT_APPROX:
        if dist.kind is not DistributionKind.DELTA_AT_MEAN:
            raise ConfigError("short_approx is defined for the delta distribution only", field="distribution")
        return gamma_short_approx(ctx, env)
    if model is Model.LONG:
        return gamma_long(ctx, env, cfg.superposition, dist)
    return gamma_generic(ctx, env, cfg.superposition.delta_x, dist)


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return "%.8e" % value


def _json_value(value):
    if isinstance(value, str):
        return value
    if math.isinf(value):
        return None
    return float("%.8e" % value)


def rate_row(cfg: ScenarioConfig, result: RateResult):
    d = result.diagnostics
    return {
        "gamma_Hz": result.gamma,
        "regime": result.regime.value,
        "coherence_time_s": result.coherence_time,
        "d1_Cm": cfg.pair.d1,
        "d2_Cm": cfg.pair.d2,
        "n_m3": cfg.environment.n,
        "p_bar": d["p_bar"],
        "lambda0_m": d["lambda0"],
        "a": d["a"],
    }


def write_rows(rows, columns, fmt, stream):
    """Write ``rows`` (dicts) as CSV (LF line endings) or a JSON array."""
    if fmt == "json":
        json.dump([{k: _json_value(r[k]) for k in columns} for r in rows], stream, indent=1)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in columns])


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_rate(cfg: ScenarioConfig, budget=None):
    """Evaluate one scenario; returns ``(result, passed, budget)``."""
    result = evaluate(cfg)
    budget = cfg.budget if budget is None else budget
    return result, result.gamma <= budget, budget


def _with_context(exc, where):
    try:
        wrapped = type(exc)(f"{where}: {exc}")
    except TypeError:
        return exc
    return wrapped


def cmd_sweep(cfg: ScenarioConfig, jobs=1):
    """Evaluate the sweep of ``cfg``; returns ``(rows, columns)`` in grid order."""
    sweep = cfg.sweep
    if sweep is None:
        raise ConfigError("scenario has no sweep.* keys")
    overlay_values = sweep.overlay_values if sweep.overlay else (None,)
    points = [(o, x) for o in overlay_values for x in sweep.grid()]
    lead = [sweep.variable] + ([sweep.overlay] if sweep.overlay else [])

    def one(point):
        overlay_value, x = point
        try:
            c = cfg if overlay_value is None else cfg.with_field(sweep.overlay, overlay_value)
            c = c.with_field(sweep.variable, x)
            row = {sweep.variable: x}
            if sweep.overlay:
                row[sweep.overlay] = overlay_value
            if sweep.output == "dipole_bound":
                row["d1_max_Cm"] = max_crystal_dipole(c.budget, c.context, c.environment)
            else:
                row.update(rate_row(c, evaluate(c)))
            return row
        except (ConfigError, DomainError, RegimeError, NumericError) as exc:
            label = f"{sweep.variable}={x:.8e}" + (f", {sweep.overlay}={overlay_value}" if sweep.overlay else "")
            raise _with_context(exc, f"sweep point {label}") from exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]
    columns = tuple(lead) + (("d1_max_Cm",) if sweep.output == "dipole_bound" else RATE_COLUMNS)
    return rows, columns


def cmd_table1(field=None, d1=1e-23, radius=1e-6):
    """Induced dipoles of the polarisable catalog species; returns ``(rows, columns)``."""
    if field is None:
        field = permanent_dipole_field(d1, radius)
    if field < 0:
        raise DomainError("field magnitude must be non-negative")
    rows = []
    for s in builtin_species_catalog():
        if s.name not in POLARIZABLE_SPECIES:
            continue
        rows.append(
            {
                "species": s.name,
                "alpha_prime_A3": s.polarizability_volume / ANGSTROM3,
                "alpha_SI": s.polarizability,
                "field_N_per_C": field,
                "d2_Cm": induced_environment_dipole(s, field),
            }
        )
    return rows, ("species", "alpha_prime_A3", "alpha_SI", "field_N_per_C", "d2_Cm")


def cmd_validate():
    from .validation import run_checks

    rows = [c.as_dict() for c in run_checks()]
    return rows, ("check", "passed", "achieved", "tolerance")


# --------------------------------------------------------------------------
# Argument handling
# --------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--distribution", choices=("delta", "mb"), help="override the momentum distribution")
    scenario.add_argument(
        "--enforce-budget",
        nargs="?",
        type=float,
        const=math.nan,
        default=None,
        metavar="HZ",
        help="exit with status 5 if a rate exceeds the budget (default: the scenario budget)",
    )
    scenario.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")

    parser = argparse.ArgumentParser(prog="dipdeco", description="Dipole-dipole decoherence rates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", parents=[common, scenario], help="evaluate one scenario")
    p.add_argument("--config", required=True, metavar="PATH")
    p = sub.add_parser("sweep", parents=[common, scenario], help="run the sweep defined in a scenario")
    p.add_argument("--config", required=True, metavar="PATH")
    p = sub.add_parser("table1", parents=[common], help="induced dipoles of common air molecules")
    p.add_argument("--field", type=float, help="applied field in N/C")
    p.add_argument("--d1", type=float, default=1e-23, help="crystal dipole in C m (when --field is absent)")
    p.add_argument("--radius", type=float, default=1e-6, help="crystal radius in m (when --field is absent)")
    sub.add_parser("validate", parents=[common], help="run the numerical self-checks")
    p = sub.add_parser("preset", parents=[common, scenario], help="run a built-in figure or table scenario")
    p.add_argument("name", choices=("fig2", "fig3", "fig4", "table1"))
    return parser


def _apply_overrides(cfg, args):
    if getattr(args, "distribution", None):
        cfg = cfg.with_field("distribution", args.distribution)
    return cfg


def _budget(args, cfg):
    if args.enforce_budget is None or math.isnan(args.enforce_budget):
        return cfg.budget
    if not args.enforce_budget > 0:
        raise ConfigError("budget must be positive", field="--enforce-budget")
    return args.enforce_budget


def _render_rate(cfg, result, passed, budget, fmt, stream):
    row = {"channel": cfg.channel.value, **rate_row(cfg, result), "budget_Hz": budget, "budget": "PASS" if passed else "FAIL"}
    if fmt == "json":
        json.dump({k: _json_value(v) for k, v in row.items()}, stream, indent=1)
        stream.write("\n")
        return
    for key, value in row.items():
        stream.write(f"{key}: {_fmt(value)}\n")


def _run(args, stream):
    if args.command == "validate":
        rows, columns = cmd_validate()
        write_rows(rows, columns, args.format, stream)
        return EXIT_OK if all(r["passed"] for r in rows) else EXIT_NUMERIC

    if args.command == "table1" or (args.command == "preset" and args.name == "table1"):
        if args.command == "preset":
            cfg = parse_config(preset_text("table1"))
            rows, columns = cmd_table1(d1=cfg.pair.d1, radius=cfg.crystal.radius)
        else:
            rows, columns = cmd_table1(args.field, args.d1, args.radius)
        write_rows(rows, columns, args.format, stream)
        return EXIT_OK

    if args.command == "preset":
        cfg = parse_config(preset_text(args.name))
    else:
        cfg = load_config(args.config)
    cfg = _apply_overrides(cfg, args)
    budget = _budget(args, cfg)

    if args.command == "rate":
        result, passed, budget = cmd_rate(cfg, budget)
        _render_rate(cfg, result, passed, budget, args.format, stream)
        return EXIT_BUDGET if (args.enforce_budget is not None and not passed) else EXIT_OK

    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    rows, columns = cmd_sweep(cfg, jobs=args.jobs)
    write_rows(rows, columns, args.format, stream)
    if args.enforce_budget is not None and any(r.get("gamma_Hz", 0.0) > budget for r in rows):
        return EXIT_BUDGET
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    buffer = io.StringIO()
    try:
        code = _run(args, buffer)
    except (ConfigError, DomainError) as exc:
        print(f"dipdeco: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeError as exc:
        print(f"dipdeco: regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericError as exc:
        print(f"dipdeco: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
