"""Command-line interface: scenario reports, sweeps, tables and figure data.

Commands emit CSV by default (header row naming columns and units) or a JSON
mirror with ``--format json``. Exit codes: 0 success, 2 validation error,
3 numerical failure. Output is deterministic: identical invocations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import NumericalError, ValidationError
from .scenario import (
    SWEEP_AXES,
    evaluate_scenario,
    figure_data,
    impact_table,
    load_scenario,
    noise_breakdown_table,
    sweep_scenario,
)

_UNITS = {
    "xi_ta": "snu", "xi_rin_atmos": "snu", "xi_rin_lo": "snu", "xi_mod": "snu",
    "xi_background": "snu", "xi_rin_signal": "snu", "v_el": "snu",
    "xi_adc": "snu", "xi_overlap": "snu", "xi_lo": "snu", "xi_leak": "snu",
    "xi_ch": "snu", "xi_d": "snu", "xi_max": "snu", "xi_total": "snu",
    "chi_ch": "snu", "chi_d": "snu", "chi": "snu",
    "mutual_info": "bits/pulse", "holevo": "bits/pulse", "holevo_wc": "bits/pulse",
    "key_rate": "bits/pulse", "key_rate_raw": "bits/pulse",
    "loss_db": "dB", "tau1_s": "s", "block_seconds": "s", "nu1_m2": "m^2",
    "xi_ta_model": "snu", "xi_rin_atmos_model": "snu", "xi_rin_lo_model": "snu",
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text = _dispatch(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satcvqkd",
        description="Excess-noise budget and CV-QKD key rates for the "
                    "satellite-to-Earth channel.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("-c", "--config", default=None,
                       help="scenario config file (YAML/JSON); defaults to the baseline system")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="output format (default csv)")
        p.add_argument("-o", "--output", default=None,
                       help="write to this file instead of stdout")

    p = sub.add_parser("run", help="Evaluate a scenario: noise budget, chi terms, key rates.")
    common(p)
    p.add_argument("--night", action="store_true",
                   help="night-time operation (replaces the background-noise term)")

    p = sub.add_parser("noise-budget", help="Print the excess-noise component table with shares.")
    common(p)
    p.add_argument("--night", action="store_true",
                   help="night-time operation (replaces the background-noise term)")

    p = sub.add_parser("sweep", help="Sweep one parameter and emit per-point budgets and rates.")
    common(p)
    p.add_argument("--axis", default=None,
                   help=f"sweep axis; one of {', '.join(SWEEP_AXES)} "
                        "(aliases: loss_dB, D_R, zenith, tau0, V_A, n)")
    p.add_argument("--min", type=float, default=None, dest="lo")
    p.add_argument("--max", type=float, default=None, dest="hi")
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--log", action="store_true", help="logarithmic axis spacing")

    p = sub.add_parser("table", help="Reproduce the published tables.")
    common(p)
    p.add_argument("which", choices=("noise-breakdown", "impact"))

    p = sub.add_parser("figure", help="Emit the data behind the published figures.")
    common(p)
    p.add_argument("which", choices=("scintillation", "broadening",
                                     "keyrate-asym", "keyrate-finite"))
    return parser


def _dispatch(args: argparse.Namespace) -> str:
    scenario = load_scenario(args.config)
    if getattr(args, "night", False):
        cfg = scenario.to_config()
        cfg["noise"]["night"] = True
        scenario = load_scenario(cfg)

    if args.cmd == "run":
        report = evaluate_scenario(scenario)
        if args.format == "json":
            return _json(report)
        return _report_csv(report)

    if args.cmd == "noise-budget":
        header, rows = noise_breakdown_table(scenario)
        return _tabular(header, rows, args.format)

    if args.cmd == "sweep":
        header, rows = sweep_scenario(
            scenario, axis=args.axis, lo=args.lo, hi=args.hi,
            points=args.points, scale="log" if args.log else None,
        )
        return _tabular(header, rows, args.format)

    if args.cmd == "table":
        if args.which == "noise-breakdown":
            header, rows = noise_breakdown_table(scenario)
        else:
            header, rows = impact_table()
        return _tabular(header, rows, args.format)

    if args.cmd == "figure":
        header, rows = figure_data(scenario, args.which)
        return _tabular(header, rows, args.format)

    raise ValidationError(f"unknown command {args.cmd!r}")


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _tabular(header, rows, fmt: str) -> str:
    if fmt == "json":
        return _json({"header": list(header), "rows": rows})
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for key in obj:
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], out)
    elif obj is None:
        out.append((prefix, "", ""))
    else:
        leaf = prefix.rsplit(".", 1)[-1]
        unit = _UNITS.get(leaf, "")
        if prefix.startswith("noise.shares_pct"):
            unit = "%"
        out.append((prefix, obj, unit))


def _report_csv(report: dict) -> str:
    flat: list = []
    # scenario echo is config data, not results; keep it out of the CSV view
    for section in ("link", "noise", "turbulence", "chi", "rates"):
        _flatten(section, report[section], flat)
    lines = ["quantity,value,unit"]
    lines.extend(f"{key},{_fmt(value)},{unit}" for key, value, unit in flat)
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    sys.exit(main())
