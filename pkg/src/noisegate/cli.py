"""Command line entry point: ``noisegate run <spec.json>`` and ``noisegate verify <suite>``.

Exit codes: 0 success, 1 a verification check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .experiments import ConfigError, ExperimentSpec, run_sweep, write_table
from .verification import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
THREADS_ENV = "NOISEGATE_THREADS"


def resolve_threads(flag: int | None) -> int:
    """``NOISEGATE_THREADS`` wins over ``--threads``; the default is 1."""
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    else:
        value = flag if flag is not None else 1
    if value < 1:
        raise ConfigError("thread count must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base random seed")
    common.add_argument("--threads", type=int, default=None, help=f"worker processes ({THREADS_ENV} overrides)")
    common.add_argument("--out", default=None, help="output file (table for run, JSON report for verify)")

    parser = argparse.ArgumentParser(prog="noisegate", description="Optimal classical noise-correction protocols.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="run an experiment file")
    run.add_argument("spec", help="experiment JSON file")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", help=f"one of: {', '.join(sorted(SUITES))}")
    return parser


def _cmd_run(args, threads: int) -> int:
    spec = ExperimentSpec.load(args.spec)
    rows = run_sweep(spec, seed=args.seed, workers=threads)
    text = write_table(spec, rows, args.out)
    if not (args.out or spec.output_path):
        sys.stdout.write(text)
    else:
        print(f"{spec.name}: {len(rows)} rows written to {args.out or spec.output_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args, threads: int) -> int:
    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    # the optimizer reads its default worker count from the environment
    os.environ[THREADS_ENV] = str(threads)
    checks = run_suite(args.suite, seed=0 if args.seed is None else args.seed)
    for c in checks:
        print(c.line())
        for f in c.failures[:20]:
            print(f"    {f}")
        if len(c.failures) > 20:
            print(f"    ... {len(c.failures) - 20} more")
    passed = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    if args.out:
        report = [{"name": c.name, "passed": c.passed, "detail": c.detail, "elapsed": c.elapsed,
                   "failures": c.failures} for c in checks]
        Path(args.out).write_text(json.dumps({"suite": args.suite, "passed": passed, "checks": report}, indent=2))
    return EXIT_OK if passed else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        threads = resolve_threads(args.threads)
        if args.command == "run":
            return _cmd_run(args, threads)
        return _cmd_verify(args, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
