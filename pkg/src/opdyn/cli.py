"""Command-line front end.

Usage:
    opdyn validate SYSTEM.json
    opdyn hopf SYSTEM.json
    opdyn expansivity --space lp --notion uniform SYSTEM.json
    opdyn cfs --space c0 --notion all SYSTEM.json
    opdyn conjugate SYSTEM.json
    opdyn verify --samples 100 --seed 7 SYSTEM.json
    opdyn classify SYSTEM.json
    opdyn report-all SYSTEM.json

Exit status: 0 when the analysis completed (whatever the verdict), 1 on bad
input, 2 when a verification check fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .cfs_expansivity import SpaceKind
from .dissipative_conjugacy import build_conjugacy, classify_chaos
from .errors import OpdynError, ParseError, SchemaError, VerificationFailed
from .growth import DEFAULT_THRESHOLD, Mode, Notion
from .report import (
    ALL_NOTIONS,
    conjugacy_report,
    dumps,
    emit_plot_data,
    encode,
    expansivity_report,
    hopf_report,
    package_from_dict,
    report_all,
    trace_rows,
    validate_report,
    verify_report,
)
from .serialization import load_system

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
SPACES = ["lp"] + [s.value for s in SpaceKind]


def _default_horizon() -> int:
    raw = os.environ.get("OPDYN_HORIZON")
    if raw is None:
        return 200
    try:
        return int(raw)
    except ValueError:
        return 200


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system description file (JSON)")
    common.add_argument("--horizon", type=_positive, default=_default_horizon(),
                        help="largest |n| examined by finite traces (default: $OPDYN_HORIZON or 200)")
    common.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="growth factor over the n = 1 value that counts as divergence")
    common.add_argument("--exact", action="store_true",
                        help="read weights as exact rationals")
    common.add_argument("--output", choices=["text", "json", "csv"], default="text")
    common.add_argument("-o", "--out", metavar="PATH", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="opdyn",
        description="Expansivity, Hopf decomposition and conjugacy analysis of weighted "
                    "composition operators on atomic spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="boundedness constants c and c-tilde")
    sub.add_parser("hopf", parents=[common], help="conservative/dissipative decomposition")
    p = sub.add_parser("expansivity", parents=[common], help="decide expansivity notions")
    p.add_argument("--space", choices=SPACES, default="lp")
    p.add_argument("--notion", choices=[n.value for n in Notion] + ["all"], default="all")
    p = sub.add_parser("cfs", parents=[common], help="expansivity on sequence spaces")
    p.add_argument("--space", choices=[s.value for s in SpaceKind], default="c0")
    p.add_argument("--notion", choices=[n.value for n in Notion] + ["all"], default="all")
    sub.add_parser("conjugate", parents=[common], help="build the conjugacy package")
    p = sub.add_parser("verify", parents=[common], help="check the conjugacy on random samples")
    p.add_argument("--package", metavar="PATH", help="package JSON from 'conjugate' to check")
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    sub.add_parser("classify", parents=[common], help="chaos classification")
    p = sub.add_parser("report-all", parents=[common], help="every applicable analysis")
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item)}")
    else:
        lines.append(f"{pad}{json.dumps(value)}")
    return lines


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    return "\n".join(_text(encode(report))) + "\n"


def _notions(args) -> tuple:
    return ALL_NOTIONS if args.notion == "all" else (Notion(args.notion),)


def _analysis(args, system) -> tuple[dict, list | None]:
    """Run the command; return the report and optional CSV trace rows."""
    cmd = args.command
    if cmd == "validate":
        return {"command": cmd, "validate": validate_report(system)}, None
    if cmd == "hopf":
        return {"command": cmd, "hopf": hopf_report(system)}, None
    if cmd in ("expansivity", "cfs"):
        report = {"command": cmd,
                  **expansivity_report(system, args.space, _notions(args), args.horizon,
                                       args.threshold)}
        mode = Mode.LP if args.space == "lp" else Mode.SUP
        return report, trace_rows(system, mode, args.horizon)
    if cmd == "conjugate":
        return {"command": cmd, "package": conjugacy_report(system, args.horizon)}, None
    if cmd == "verify":
        package = build_conjugacy(system, horizon=args.horizon)
        if args.package:
            with open(args.package, encoding="utf-8") as fh:
                data = json.load(fh)
            package = package_from_dict(data.get("package", data), package)
        return {"command": cmd,
                "verification": verify_report(system, package, args.samples, args.seed)}, None
    if cmd == "classify":
        package = build_conjugacy(system, horizon=args.horizon)
        return {"command": cmd, "hopf": hopf_report(system),
                "chaos": classify_chaos(package, system, args.horizon)}, None
    return {"command": cmd,
            **report_all(system, args.horizon, args.threshold, args.samples, args.seed)}, None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        system = load_system(args.system)
        if args.exact and not system.exact:
            system = dataclasses.replace(system, exact=True)
            system._layouts
    except OSError as exc:
        print(f"opdyn: cannot read {args.system}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, SchemaError) as exc:
        print(f"opdyn: {args.system}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OpdynError, ValueError) as exc:
        print(f"opdyn: {args.system}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        report, rows = _analysis(args, system)
    except VerificationFailed as exc:
        print(f"opdyn: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (OpdynError, ValueError, KeyError) as exc:
        print(f"opdyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.output == "csv":
        if rows is None:
            print("opdyn: csv output is available for expansivity and cfs only", file=sys.stderr)
            return EXIT_INPUT
        text = emit_plot_data(rows)
    else:
        text = _render(report, args.output)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
