"""Command-line entry point: ``mimo-mc <subcommand> [--config F] [--out F] [--seed N] [--set k=v]``.

Exit codes: 0 success, 1 property failure, 2 invalid configuration or input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import InvalidParameterError
from ..formats import csv_text, format_record, read_observation, write_matrix
from ..solver import recovery_error
from .acceptance import run_acceptance
from .config import load_config
from .experiments import (bounds_record, run_coherence_sweep, run_complete, run_eta_sweep,
                          run_recovery_phase, run_surface, synthesize_observation)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

TABLES = {
    "coherence-sweep": run_coherence_sweep,
    "eta-sweep": run_eta_sweep,
    "surface": run_surface,
    "recovery-phase": run_recovery_phase,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimo-mc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*TABLES, "bounds", "complete", "acceptance"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output path (default: config 'output' or stdout)")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key, e.g. tx.count=32 (repeatable)")
        if name == "complete":
            p.add_argument("--input", help="observation file; synthesized from the config if absent")
            p.add_argument("--residuals", help="write the residual history CSV here")
        if name == "acceptance":
            p.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    return parser


def _emit(text: str, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.command, args.set, args.seed)
        out = args.out or cfg.output
        if args.command in TABLES:
            table = TABLES[args.command](cfg)
            _emit(table.to_csv(cfg), out)
            if table.violations:
                print(f"{table.violations} rows exceed their bound", file=sys.stderr)
                return EXIT_FAIL
            return EXIT_OK
        if args.command == "bounds":
            _emit(format_record(bounds_record(cfg)), out)
            return EXIT_OK
        if args.command == "complete":
            truth = None
            if args.input:
                obs = read_observation(args.input)
            else:
                truth, obs = synthesize_observation(cfg)
            res = run_complete(cfg, obs)
            if out:
                write_matrix(out, res.estimate)
            else:
                write_matrix(sys.stdout, res.estimate)
            if args.residuals:
                Path(args.residuals).write_text(csv_text(
                    ["iter", "residual"], enumerate(res.residual_history),
                    cfg.hash_payload(), cfg.seed))
            summary = {"iterations": res.iterations, "converged": res.converged}
            if truth is not None:
                summary["rel_frob"] = recovery_error(truth, res.estimate).rel_frob
            print(format_record(summary), end="", file=sys.stderr)
            return EXIT_OK
        results = run_acceptance(cfg, only=args.only,
                                 echo=lambda line: print(line, flush=True))
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
        return EXIT_FAIL if failed else EXIT_OK
    except (InvalidParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
