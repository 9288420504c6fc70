"""Command-line entry point.

    hybrid-coherence <fig2|fig3|fig4|evolve|oracle-check|selftest>
        [--config FILE] [--set section.key=value ...] [--workers N] [--seed S]
        [--flat-bath] [--no-lamb-shift] [--out FILE] [--print-config]

Tables go to ``--out`` (or stdout) as CSV. Failures exit nonzero with a
single JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import config as cfgmod
from .selftest import run_selftest
from .sweeps import RUNNERS, to_csv, write_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybrid-coherence",
                                     description="Nuclear-spin coherence in a damped hybrid spin pair.")
    parser.add_argument("command", choices=cfgmod.COMMANDS)
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key, e.g. bath.gamma0=0.05")
    parser.add_argument("--workers", type=int, help="parallel grid-point workers")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--flat-bath", action="store_true",
                        help="rates from J = gamma0, no Lamb shift")
    parser.add_argument("--no-lamb-shift", action="store_true",
                        help="drop the principal-value parts of the rates")
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    parser.add_argument("--print-config", action="store_true",
                        help="print the resolved configuration and exit")
    return parser


def resolve_args(args) -> dict:
    overrides = list(args.overrides)
    if args.flat_bath and args.no_lamb_shift:
        raise cfgmod.ConfigError("--flat-bath and --no-lamb-shift are exclusive")
    if args.flat_bath:
        overrides.append("rates.model=flat")
    if args.no_lamb_shift:
        overrides.append("rates.model=no-lamb")
    if args.workers is not None:
        overrides.append(f"run.workers={args.workers}")
    if args.seed is not None:
        overrides.append(f"mc.seed={args.seed}")
    if args.out is not None:
        overrides.append(f"run.out={json.dumps(args.out)}")
    return cfgmod.resolve(args.command, args.config, overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_args(args)
        if args.print_config:
            sys.stdout.write(cfgmod.dump(cfg))
            return 0
        if args.command == "selftest":
            return 0 if run_selftest() else 1
        table = RUNNERS[args.command](cfg)
        out = cfg["run"].get("out")
        if out:
            write_csv(table, out)
        else:
            sys.stdout.write(to_csv(table))
        return 0
    except Exception as exc:
        code = 2 if isinstance(exc, cfgmod.ConfigError) else 1
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc),
                                     "command": args.command}) + "\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
