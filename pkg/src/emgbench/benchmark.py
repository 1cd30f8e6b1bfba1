"""Benchmark harness: runs the feature-family x classifier grid over a
dataset and renders the per-family results tables."""
from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classify.pipeline import MODEL_NAMES, fit_pipeline
from .evaluate import ConfusionMatrix, EvalError, EvaluationReport, metrics, stratified_split
from .features.extract import FAMILIES, FeatureMatrix, extract
from .features.tdd import TddParams
from .preprocess import bandpass, segment_records
from .signal_io import generate_synthetic, load_canonical_csv, load_manifest

MODEL_DISPLAY = {
    "lda": "LDA",
    "svm": "SVM",
    "knn": "KNN",
    "random_forest": "Random Forest",
    "voting": "Voting Ensemble",
    "bagging_knn": "Bagging KNN",
    "bagging_svm": "Bagging SVM",
    "adaboost": "AdaBoost",
}
DEEP_ROWS = ("1D Dilated CNN", "1D Dilated CNN-LSTM")  # reported as not implemented

_CONFIG_KEYS = {
    "dataset",
    "families",
    "models",
    "seed",
    "test_fraction",
    "window_ms",
    "overlap",
    "band",
    "jobs",
    "tdd",
    "subject_split",
}
_SYNTH_KEYS = {"n_classes", "n_channels", "fs", "trials_per_class", "trial_seconds"}


class ConfigError(ValueError):
    pass


@dataclass
class BenchmarkConfig:
    dataset: dict
    families: tuple[str, ...] = FAMILIES
    models: tuple[str, ...] = MODEL_NAMES
    seed: int = 0
    test_fraction: float = 0.2
    window_ms: float = 600.0
    overlap: float = 0.5
    band: tuple[float, float, int] = (20.0, 450.0, 8)
    jobs: int = 1
    tdd: TddParams = field(default_factory=TddParams)
    subject_split: bool = False

    def __post_init__(self):
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown feature family: {fam!r}")
        for m in self.models:
            if m not in MODEL_NAMES:
                raise ConfigError(f"unknown model: {m!r}")
        if set(self.dataset) == {"manifest"} or set(self.dataset) == {"synthetic"}:
            pass
        else:
            raise ConfigError("dataset must have exactly one of 'manifest' or 'synthetic'")
        if "synthetic" in self.dataset:
            unknown = set(self.dataset["synthetic"]) - _SYNTH_KEYS
            if unknown:
                raise ConfigError(f"unknown synthetic keys: {sorted(unknown)}")

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkConfig":
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(doc)
        if "families" in kwargs:
            kwargs["families"] = tuple(kwargs["families"])
        if "models" in kwargs:
            kwargs["models"] = tuple(kwargs["models"])
        if "band" in kwargs:
            band = kwargs["band"]
            kwargs["band"] = (float(band["low"]), float(band["high"]), int(band["order"]))
        if "tdd" in kwargs:
            kwargs["tdd"] = TddParams(**kwargs["tdd"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: str | Path) -> "BenchmarkConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def echo(self) -> dict:
        """Fully-resolved configuration and decision record for reports."""
        return {
            "dataset": self.dataset,
            "families": list(self.families),
            "models": list(self.models),
            "seed": self.seed,
            "test_fraction": self.test_fraction,
            "window_ms": self.window_ms,
            "overlap": self.overlap,
            "band": {"low": self.band[0], "high": self.band[1], "order": self.band[2]},
            "subject_split": self.subject_split,
            "decisions": {
                "moment_exponent_k": self.tdd.k,
                "lambda_mode": self.tdd.lambda_mode,
                "eps": self.tdd.eps,
                "irf_standard": self.tdd.irf_standard,
                "averaging": "macro",
                "voting": "hard vote over svm, knn, random_forest",
                "scaling": "z-score for lda/svm/knn/bagging; identity for tree ensembles",
                "split": "subject-wise" if self.subject_split else "stratified by window",
            },
        }


def cell_seed(global_seed: int, family: str, model: str) -> int:
    digest = hashlib.sha256(f"{global_seed}:{family}:{model}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


def _load_records(config: BenchmarkConfig):
    if "manifest" in config.dataset:
        manifest = load_manifest(config.dataset["manifest"])
        records = load_canonical_csv(config.dataset["manifest"])
        class_names = list(manifest.class_names)
    else:
        spec = config.dataset["synthetic"]
        records = generate_synthetic(seed=config.seed, **spec)
        class_names = [f"class{i}" for i in range(spec["n_classes"])]
    return records, class_names


def _subject_split(subjects: np.ndarray, test_fraction: float, seed: int):
    unique = sorted(set(subjects.tolist()))
    if len(unique) < 2:
        raise EvalError("subject-wise split needs at least 2 subjects")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(unique)
    n_test = max(1, int(round(len(unique) * test_fraction)))
    test_subjects = set(perm[:n_test].tolist())
    mask = np.array([s in test_subjects for s in subjects])
    return np.flatnonzero(~mask), np.flatnonzero(mask)


def run_benchmark(config: BenchmarkConfig):
    """Execute every (family, model) cell.

    Returns (reports, errors); a failing cell lands in errors and does not
    abort the rest of the grid.
    """
    records, class_names = _load_records(config)
    low, high, order = config.band
    filtered = [bandpass(rec, low, high, order) for rec in records]
    ws = segment_records(filtered, config.window_ms, config.overlap)
    window_subjects = np.array(
        [records[w.origin[0]].subject for w in ws.windows]
    )

    feature_cache: dict[str, FeatureMatrix] = {}
    errors: dict[tuple[str, str], str] = {}
    for family in config.families:
        try:
            feature_cache[family] = extract(ws, family, config.tdd)
        except Exception as exc:  # feature failure poisons the family's cells
            for model in config.models:
                errors[(family, model)] = str(exc)

    def run_cell(family: str, model: str) -> EvaluationReport:
        fm = feature_cache[family]
        seed = cell_seed(config.seed, family, model)
        if config.subject_split:
            train_idx, test_idx = _subject_split(window_subjects, config.test_fraction, seed)
        else:
            train_idx, test_idx = stratified_split(fm.labels, config.test_fraction, seed)
        train, test = fm.select(train_idx), fm.select(test_idx)
        t0 = time.perf_counter()
        pipeline = fit_pipeline(model, train, seed=seed)
        t1 = time.perf_counter()
        predicted = pipeline.predict(test.values)
        t2 = time.perf_counter()
        cm = ConfusionMatrix.from_labels(test.labels, predicted, class_names)
        return EvaluationReport(
            family=family,
            model=model,
            metrics=metrics(cm),
            confusion=cm,
            config=config.echo(),
            seed=seed,
            timing={"fit_seconds": t1 - t0, "predict_seconds": t2 - t1},
        )

    cells = [
        (family, model)
        for family in config.families
        for model in config.models
        if (family, model) not in errors
    ]
    reports: list[EvaluationReport] = []
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = {cell: pool.submit(run_cell, *cell) for cell in cells}
        for cell, fut in futures.items():
            try:
                reports.append(fut.result())
            except Exception as exc:
                errors[cell] = str(exc)
    else:
        for cell in cells:
            try:
                reports.append(run_cell(*cell))
            except Exception as exc:
                errors[cell] = str(exc)
    # deterministic report order regardless of execution order
    order_key = {cell: i for i, cell in enumerate(cells)}
    reports.sort(key=lambda r: order_key[(r.family, r.model)])
    return reports, errors


def render_table(reports: list[EvaluationReport], errors: dict | None = None) -> str:
    """Per-family tables in the row layout LDA .. AdaBoost plus the deep
    rows marked not implemented."""
    errors = errors or {}
    by_cell = {(r.family, r.model): r for r in reports}
    families = []
    for r in reports:
        if r.family not in families:
            families.append(r.family)
    for fam, _ in errors:
        if fam not in families:
            families.append(fam)
    lines = []
    for family in families:
        lines.append(f"=== {family} ===")
        lines.append(f"{'Models':<22}{'ACC':>8}{'P':>7}{'R':>7}{'F1':>7}")
        for model in MODEL_NAMES:
            name = MODEL_DISPLAY[model]
            if (family, model) in by_cell:
                r = by_cell[(family, model)]
                m = r.metrics
                lines.append(
                    f"{name:<22}{100 * m.accuracy:>8.2f}{m.macro_precision:>7.2f}"
                    f"{m.macro_recall:>7.2f}{m.macro_f1:>7.2f}"
                )
            elif (family, model) in errors:
                lines.append(f"{name:<22}  FAILED: {errors[(family, model)]}")
        for deep in DEEP_ROWS:
            lines.append(f"{deep:<22}  not implemented")
        lines.append("")
    return "\n".join(lines)


def render_csv(reports: list[EvaluationReport]) -> str:
    lines = ["family,model,accuracy,macro_precision,macro_recall,macro_f1"]
    for r in reports:
        m = r.metrics
        lines.append(
            f"{r.family},{r.model},{m.accuracy:.6f},{m.macro_precision:.6f},"
            f"{m.macro_recall:.6f},{m.macro_f1:.6f}"
        )
    return "\n".join(lines) + "\n"


def write_bundle(
    out_dir: str | Path,
    config: BenchmarkConfig,
    reports: list[EvaluationReport],
    errors: dict,
) -> None:
    """One JSON per cell plus the aggregate table (text and CSV) and the
    fully-resolved config."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in reports:
        path = out_dir / f"{r.family}_{r.model}.json"
        path.write_text(json.dumps(r.to_json_dict(), indent=2, sort_keys=True))
    (out_dir / "table.txt").write_text(render_table(reports, errors))
    (out_dir / "table.csv").write_text(render_csv(reports))
    (out_dir / "resolved_config.json").write_text(
        json.dumps(config.echo(), indent=2, sort_keys=True)
    )
    if errors:
        (out_dir / "errors.json").write_text(
            json.dumps({f"{f}:{m}": msg for (f, m), msg in errors.items()}, indent=2, sort_keys=True)
        )
