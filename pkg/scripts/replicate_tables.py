#!/usr/bin/env python3
"""Replicate the benchmark tables on a user-supplied dataset.

Point --manifest at a manifest.json describing canonical CSV trials (or
WFDB format-16 headers); one report bundle is written per run.  With
--subject-split the train/test partition separates subjects instead of
stratifying over windows.

Usage:
    python scripts/replicate_tables.py --manifest data/grabmyo/manifest.json \
        --out runs/grabmyo [--subject-split] [--seed 0] [--jobs 4]
"""
from __future__ import annotations

import argparse
import sys

from emgbench.benchmark import BenchmarkConfig, render_table, run_benchmark, write_bundle
from emgbench.features.extract import FAMILIES
from emgbench.classify.pipeline import MODEL_NAMES


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--out", required=True, help="report bundle directory")
    parser.add_argument("--families", nargs="+", choices=FAMILIES, default=list(FAMILIES))
    parser.add_argument("--models", nargs="+", choices=MODEL_NAMES, default=list(MODEL_NAMES))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--test-fraction", type=float, default=0.2)
    parser.add_argument("--subject-split", action="store_true")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    config = BenchmarkConfig(
        dataset={"manifest": args.manifest},
        families=tuple(args.families),
        models=tuple(args.models),
        seed=args.seed,
        test_fraction=args.test_fraction,
        subject_split=args.subject_split,
        jobs=args.jobs,
    )
    reports, errors = run_benchmark(config)
    print(render_table(reports, errors))
    write_bundle(args.out, config, reports, errors)
    if errors:
        print(f"{len(errors)} cells failed; see errors.json in {args.out}", file=sys.stderr)
    print(f"report bundle written to {args.out}")
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
