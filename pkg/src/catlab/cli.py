"""Command line entry point: ``catlab run|selftest|measure``.

Exit codes: 0 success, 1 validation error, 2 numerical-invariant failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import distinguish
from .experiments import ConfigError, ExperimentConfig, run
from .qmat import DimensionError
from .selftest import selftest
from .stateio import StateFileError, load_state

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


def _cmd_run(args) -> int:
    overrides = {
        "seed": args.seed,
        "output_path": args.output,
        "budget": args.budget,
        "sample_count": args.samples,
    }
    try:
        cfg = ExperimentConfig.load(args.config, overrides)
    except (ConfigError, TypeError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = run(cfg)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, MemoryError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{cfg.experiment}: {len(result.rows)} rows -> {result.csv_path}, {result.json_path}")
    if result.failure:
        print(f"invariant failure: {result.failure}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = selftest(seed=args.seed, size=args.size)
    failed = 0
    for r in results:
        status = "ok" if r.failed == 0 else "FAIL"
        print(f"{r.name:<12} {r.passed:4d} passed {r.failed:4d} failed  {status}")
        for msg in r.messages[:5]:
            print(f"    - {msg}")
        failed += r.failed
    return EXIT_NUMERIC if failed else EXIT_OK


def _cmd_measure(args) -> int:
    try:
        rho, sigma = load_state(args.state_a), load_state(args.state_b)
        if rho.dim != sigma.dim:
            raise DimensionError(f"states have dimensions {rho.dim} and {sigma.dim}")
    except (StateFileError, DimensionError) as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID
    k = distinguish.dmax(rho, sigma)
    out = {
        "fidelity": distinguish.uhlmann_fidelity(rho, sigma),
        "purified_distance": distinguish.purified_distance(rho, sigma),
        "dmax": k if k != float("inf") else "inf",
    }
    print(json.dumps(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config (YAML)")
    p.add_argument("config")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="output path stem; .csv and .json are written")
    p.add_argument("--budget", type=int, help="cap on dense-construction dimensions")
    p.add_argument("--samples", type=int, help="override sample_count")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("selftest", help="run reduced invariant suites")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--size", type=int, default=10)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("measure", help="fidelity, purified distance and D_max between two state files")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.set_defaults(func=_cmd_measure)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
