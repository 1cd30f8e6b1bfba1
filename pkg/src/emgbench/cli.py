"""Command-line entry point: synth, extract, train, bench, report.

Exit codes: 0 success, 1 benchmark cell failure, 2 usage/config error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .benchmark import (
    BenchmarkConfig,
    ConfigError,
    render_table,
    run_benchmark,
    write_bundle,
)
from .classify.pipeline import MODEL_NAMES, Pipeline, fit_pipeline
from .evaluate import ConfusionMatrix, metrics, stratified_split
from .features.extract import FAMILIES, FeatureMatrix, extract
from .features.tdd import TddParams
from .preprocess import bandpass, segment_records
from .signal_io import generate_synthetic, load_canonical_csv, write_dataset


def _default_seed() -> int:
    return int(os.environ.get("EMG_SEED", "0"))


def _write_run_config(out_dir: Path, args: argparse.Namespace) -> None:
    """Every run directory records its resolved arguments and versions."""
    doc = {k: v for k, v in vars(args).items() if k != "func"}
    doc["emgbench_version"] = __version__
    doc["python"] = sys.version.split()[0]
    (out_dir / "run_config.json").write_text(json.dumps(doc, indent=2, sort_keys=True, default=str))


def cmd_synth(args) -> int:
    out_dir = Path(args.out)
    if out_dir.exists() and any(out_dir.iterdir()) and not args.force:
        print(f"error: output directory {out_dir} is not empty (use --force)", file=sys.stderr)
        return 2
    records = generate_synthetic(
        n_classes=args.classes,
        n_channels=args.channels,
        fs=args.fs,
        trials_per_class=args.trials,
        trial_seconds=args.seconds,
        seed=args.seed,
    )
    class_names = [f"class{i}" for i in range(args.classes)]
    manifest = write_dataset(records, class_names, out_dir)
    _write_run_config(out_dir, args)
    print(f"wrote {len(records)} trials and {manifest}")
    return 0


def _tdd_params(args) -> TddParams:
    return TddParams(k=args.k, eps=args.eps, irf_standard=args.irf_standard)


def cmd_extract(args) -> int:
    records = load_canonical_csv(args.manifest)
    filtered = [bandpass(r, args.low, args.high, args.order) for r in records]
    ws = segment_records(filtered, args.window_ms, args.overlap)
    fm = extract(ws, args.family, _tdd_params(args))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fm.to_csv(out)
    print(f"wrote {fm.n_rows} x {fm.n_features} feature matrix to {out}")
    return 0


def cmd_train(args) -> int:
    fm = FeatureMatrix.from_csv(args.features)
    train_idx, test_idx = stratified_split(fm.labels, args.test_fraction, args.seed)
    pipeline = fit_pipeline(args.model, fm.select(train_idx), seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    pipeline.save(out)
    test = fm.select(test_idx)
    cm = ConfusionMatrix.from_labels(
        test.labels,
        pipeline.predict(test.values),
        [str(c) for c in range(int(fm.labels.max()) + 1)],
    )
    report = metrics(cm)
    print(f"saved {args.model} to {out}; held-out accuracy {report.accuracy:.4f}")
    return 0


def _config_from_args(args) -> BenchmarkConfig:
    if args.config:
        config = BenchmarkConfig.from_json(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.jobs is not None:
            config.jobs = args.jobs
        return config
    if args.manifest:
        dataset = {"manifest": args.manifest}
    elif args.synthetic:
        dataset = {"synthetic": json.loads(args.synthetic)}
    else:
        raise ConfigError("one of --config, --manifest, or --synthetic is required")
    return BenchmarkConfig(
        dataset=dataset,
        families=tuple(args.families),
        models=tuple(args.models),
        seed=args.seed if args.seed is not None else _default_seed(),
        test_fraction=args.test_fraction,
        jobs=args.jobs if args.jobs is not None else 1,
        subject_split=args.subject_split,
    )


def cmd_bench(args) -> int:
    try:
        config = _config_from_args(args)
        reports, errors = run_benchmark(config)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render_table(reports, errors))
    if args.out:
        out_dir = Path(args.out)
        write_bundle(out_dir, config, reports, errors)
        _write_run_config(out_dir, args)
        print(f"report bundle written to {out_dir}")
    return 1 if errors else 0


def cmd_report(args) -> int:
    """Re-render the aggregate table from a bundle of per-cell JSON files."""
    from .evaluate import EvaluationReport, MetricsReport

    bundle = Path(args.bundle)
    reports = []
    for path in sorted(bundle.glob("*.json")):
        doc = json.loads(path.read_text())
        if "family" not in doc or "model" not in doc:
            continue
        reports.append(
            EvaluationReport(
                family=doc["family"],
                model=doc["model"],
                metrics=MetricsReport(
                    accuracy=doc["accuracy"],
                    per_class_precision=tuple(doc["per_class"]["precision"]),
                    per_class_recall=tuple(doc["per_class"]["recall"]),
                    per_class_f1=tuple(doc["per_class"]["f1"]),
                    macro_precision=doc["macro_precision"],
                    macro_recall=doc["macro_recall"],
                    macro_f1=doc["macro_f1"],
                ),
                confusion=ConfusionMatrix(
                    counts=doc["confusion"], class_names=tuple(doc["class_names"])
                ),
                config=doc.get("config", {}),
                seed=doc.get("seed", 0),
            )
        )
    if not reports:
        print(f"error: no cell reports found in {bundle}", file=sys.stderr)
        return 2
    print(render_table(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emgbench", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--classes", type=int, default=8)
    p.add_argument("--channels", type=int, default=8)
    p.add_argument("--fs", type=float, default=2048.0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seconds", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="filter, segment, and extract one feature family")
    p.add_argument("--manifest", required=True)
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window-ms", dest="window_ms", type=float, default=600.0)
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--low", type=float, default=20.0)
    p.add_argument("--high", type=float, default=450.0)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--k", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--irf-standard", dest="irf_standard", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="fit one model on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--model", choices=MODEL_NAMES, required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--test-fraction", dest="test_fraction", type=float, default=0.2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="run the feature x classifier benchmark grid")
    p.add_argument("--config", help="JSON benchmark config")
    p.add_argument("--manifest", help="dataset manifest path")
    p.add_argument("--synthetic", help="inline synthetic spec as JSON")
    p.add_argument("--families", nargs="+", choices=FAMILIES, default=list(FAMILIES))
    p.add_argument("--models", nargs="+", choices=MODEL_NAMES, default=list(MODEL_NAMES))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--test-fraction", dest="test_fraction", type=float, default=0.2)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--subject-split", dest="subject_split", action="store_true")
    p.add_argument("--out", help="report bundle output directory")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="re-render the table from a report bundle")
    p.add_argument("--bundle", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
