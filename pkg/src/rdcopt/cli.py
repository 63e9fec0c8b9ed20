"""Command-line harness.

    rdcopt bench dca-vs-dcppa --n-min 2 --n-max 20 --out DIR
    rdcopt bench rosenbrock --a 2e5 --b 1 [--long-run] --out DIR
    rdcopt bench frechet --n 5 --m 20 --seed 42 --out DIR
    rdcopt check duality --out DIR

Exit codes: 0 on success, 1 on any failure inside a run, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import (
    ExperimentConfig,
    default_seed,
    run_dca_vs_dcppa,
    run_duality_checks,
    run_frechet,
    run_rosenbrock,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdcopt",
        description="Difference-of-convex optimization benchmarks on Hadamard manifolds")
    commands = parser.add_subparsers(dest="command", required=True)

    bench = commands.add_parser("bench", help="run a benchmark experiment")
    experiments = bench.add_subparsers(dest="experiment", required=True)

    p = experiments.add_parser("dca-vs-dcppa",
                               help="log-det comparison of DCA and DCPPA over n")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--out", required=True)

    p = experiments.add_parser("rosenbrock",
                               help="four first-order methods on the Rosenbrock problem")
    p.add_argument("--a", type=float, default=2e5)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--long-run", action="store_true",
                   help="run Euclidean gradient descent to its natural stop "
                        "(tens of millions of iterations)")
    p.add_argument("--out", required=True)

    p = experiments.add_parser("frechet",
                               help="constrained Frechet-variance maximization")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--seed", type=int, default=None,
                   help="instance seed (default: $RDCOPT_SEED or 42)")
    p.add_argument("--out", required=True)

    check = commands.add_parser("check", help="run a verification suite")
    checks = check.add_subparsers(dest="suite", required=True)
    p = checks.add_parser("duality", help="Fenchel duality checks on the 1-D family")
    p.add_argument("--out", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            if args.experiment == "dca-vs-dcppa":
                config = ExperimentConfig(out_dir=args.out, n_min=args.n_min,
                                          n_max=args.n_max)
                summary = run_dca_vs_dcppa(config)
                ok = not summary["failures"]
            elif args.experiment == "rosenbrock":
                config = ExperimentConfig(out_dir=args.out, a=args.a, b=args.b,
                                          long_run=args.long_run)
                summary = run_rosenbrock(config)
                ok = True
            else:
                seed = args.seed if args.seed is not None else default_seed()
                config = ExperimentConfig(out_dir=args.out, n=args.n, m=args.m, seed=seed)
                summary = run_frechet(config)
                ok = True
        else:
            config = ExperimentConfig(out_dir=args.out)
            summary = run_duality_checks(config)
            ok = summary["passed"]
    except ValueError as exc:
        # bad sizes, degenerate instances and similar configuration problems
        print(f"rdcopt: error: {exc}", file=sys.stderr)
        return 2
    json.dump(summary, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
