"""Command line entry point.

::

    pseudoherm validate CONFIG [--output PATH] [--format json|csv] [--seed N] [--tolerance-scale X] [--timing]
    pseudoherm spectrum CONFIG ...
    pseudoherm evolve CONFIG ...
    pseudoherm presets

Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error,
3 numeric/capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report, spin_chain
from .config import parse_config
from .errors import CapacityError, NumericError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pseudoherm", description="Pseudo-hermitian many-body workbench")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for verb, text in (
        ("validate", "run the configured checks and write a report"),
        ("spectrum", "write the matched spectra of H and its hermitian partner"),
        ("evolve", "write the Dirac- and eta-norm trace of a time evolution"),
    ):
        p = sub.add_parser(verb, help=text)
        p.add_argument("config", help="configuration file ('-' for stdin)")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), help="output format")
        p.add_argument("--seed", type=int, help="override the configuration seed")
        p.add_argument("--tolerance-scale", type=float, help="multiply all default tolerances")
        p.add_argument("--timing", action="store_true", help="include per-check wall times (breaks byte-identity)")
    sub.add_parser("presets", help="list the built-in parameter presets")
    return parser


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    if args.command == "presets":
        _emit(json.dumps(spin_chain.PRESETS, indent=2) + "\n", None)
        return EXIT_OK
    overrides = {"seed": args.seed, "tolerance_scale": args.tolerance_scale, "format": args.format, "output": args.output}
    cfg = parse_config(_read(args.config), overrides)
    fmt = cfg.format
    if args.command == "validate":
        rep = report.run_validation(cfg, spectra=fmt == "csv")
        text = report.spectra_csv(rep.spectra) if fmt == "csv" else rep.to_json(args.timing)
        _emit(text, cfg.output)
        return rep.exit_code
    if args.command == "spectrum":
        cfg.checks = []
        rep = report.run_validation(cfg, spectra=True)
        text = report.spectra_csv(rep.spectra) if fmt == "csv" else rep.to_json(args.timing)
        _emit(text, cfg.output)
        return EXIT_OK
    trace = report.evolution_trace(cfg)
    _emit(report.trace_csv(trace) if fmt == "csv" else report.trace_json(cfg, trace), cfg.output)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (NumericError, CapacityError) as exc:
        kind = "capacity" if isinstance(exc, CapacityError) else "numeric"
        print(f"pseudoherm: {kind} error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, OSError) as exc:
        print(f"pseudoherm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
