#!/usr/bin/env python3
"""Run the full feature-family x classifier grid on the seeded synthetic
dataset and write a report bundle.

Usage:
    python scripts/run_synthetic_benchmark.py --out runs/synthetic [--seed 0]
"""
from __future__ import annotations

import argparse
import sys

from emgbench.benchmark import BenchmarkConfig, render_table, run_benchmark, write_bundle


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="report bundle directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--classes", type=int, default=8)
    parser.add_argument("--channels", type=int, default=8)
    parser.add_argument("--fs", type=float, default=2048.0)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seconds", type=float, default=5.0)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    config = BenchmarkConfig(
        dataset={
            "synthetic": {
                "n_classes": args.classes,
                "n_channels": args.channels,
                "fs": args.fs,
                "trials_per_class": args.trials,
                "trial_seconds": args.seconds,
            }
        },
        seed=args.seed,
        jobs=args.jobs,
    )
    reports, errors = run_benchmark(config)
    print(render_table(reports, errors))
    write_bundle(args.out, config, reports, errors)
    print(f"report bundle written to {args.out}")
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
