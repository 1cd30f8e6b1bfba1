"""Dataset ingestion: canonical CSV trials, a minimal WFDB reader, and a
seeded synthetic generator used for desk-scale experiments and tests."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import signal as sps


class IngestError(ValueError):
    """Raised for malformed dataset files or manifests."""


@dataclass(frozen=True)
class SignalRecord:
    """One multi-channel sEMG trial.

    samples are [channels x time]; values must be finite, fs positive.
    """

    samples: np.ndarray
    fs: float
    label: int
    subject: str = ""
    session: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if self.fs <= 0:
            raise IngestError(f"sampling rate must be positive, got {self.fs}")
        if samples.ndim != 2 or samples.shape[1] < 2:
            raise IngestError(
                f"samples must be [channels x time] with length >= 2, got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise IngestError("samples contain non-finite values")
        if self.label < 0:
            raise IngestError(f"label must be >= 0, got {self.label}")
        samples.setflags(write=False)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    label: int
    subject: str = ""
    session: str = ""
    fs: float = 0.0


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    class_names: tuple[str, ...]

    def __post_init__(self):
        paths = [e.path for e in self.entries]
        if len(set(paths)) != len(paths):
            raise IngestError("manifest paths are not unique")
        for e in self.entries:
            if not (0 <= e.label < len(self.class_names)):
                raise IngestError(
                    f"label out of range: entry {e.path!r} has label {e.label} "
                    f"but class_names has length {len(self.class_names)}"
                )


_MANIFEST_KEYS = {"path", "label", "subject", "session", "fs"}


def load_manifest(manifest_path: str | Path) -> DatasetManifest:
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise IngestError(f"manifest file not found: {manifest_path}")
    doc = json.loads(manifest_path.read_text())
    entries = []
    for raw in doc.get("entries", []):
        unknown = set(raw) - _MANIFEST_KEYS
        if unknown:
            raise IngestError(f"unknown manifest entry keys: {sorted(unknown)}")
        entries.append(
            ManifestEntry(
                path=raw["path"],
                label=int(raw["label"]),
                subject=raw.get("subject", ""),
                session=raw.get("session", ""),
                fs=float(raw.get("fs", 0.0)),
            )
        )
    return DatasetManifest(entries=tuple(entries), class_names=tuple(doc["class_names"]))


def _read_csv_matrix(path: Path) -> np.ndarray:
    """Read a samples-as-rows, channels-as-columns CSV, reporting bad cells."""
    if not path.exists():
        raise IngestError(f"signal file not found: {path}")
    rows = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            row = []
            for j, cell in enumerate(cells):
                try:
                    value = float(cell)
                except ValueError:
                    raise IngestError(
                        f"non-numeric cell at row {i}, column {j} of {path}: {cell!r}"
                    ) from None
                if not np.isfinite(value):
                    raise IngestError(
                        f"non-finite cell at row {i}, column {j} of {path}: {cell!r}"
                    )
                row.append(value)
            rows.append(row)
    if not rows:
        raise IngestError(f"empty signal file: {path}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise IngestError(f"ragged rows in {path}: widths {sorted(widths)}")
    return np.asarray(rows, dtype=np.float64)


def load_canonical_csv(manifest_path: str | Path) -> list[SignalRecord]:
    """Load every entry of a JSON manifest; CSV layout is time x channels."""
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    base = manifest_path.parent
    records = []
    n_channels = None
    for entry in manifest.entries:
        path = Path(entry.path)
        if not path.is_absolute():
            path = base / path
        if path.suffix == ".hea":
            rec = load_wfdb_record(
                path, label=entry.label, subject=entry.subject, session=entry.session
            )
        else:
            matrix = _read_csv_matrix(path)
            rec = SignalRecord(
                samples=matrix.T,
                fs=entry.fs,
                label=entry.label,
                subject=entry.subject,
                session=entry.session,
            )
        if n_channels is None:
            n_channels = rec.n_channels
        elif rec.n_channels != n_channels:
            raise IngestError(
                f"inconsistent channel count: {path} has {rec.n_channels}, expected {n_channels}"
            )
        records.append(rec)
    return records


def write_canonical_csv(record: SignalRecord, path: str | Path) -> None:
    """Write samples-as-rows CSV at full float precision (exact round trip)."""
    np.savetxt(path, record.samples.T, fmt="%.17g", delimiter=",")


def write_dataset(records: list[SignalRecord], class_names: list[str], out_dir: str | Path) -> Path:
    """Write one CSV per record plus a manifest.json; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, rec in enumerate(records):
        name = f"trial_{i:04d}.csv"
        write_canonical_csv(rec, out_dir / name)
        entries.append(
            {
                "path": name,
                "label": int(rec.label),
                "subject": rec.subject,
                "session": rec.session,
                "fs": rec.fs,
            }
        )
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps({"entries": entries, "class_names": list(class_names)}, indent=2)
    )
    return manifest_path


def load_wfdb_record(
    header_path: str | Path, label: int = 0, subject: str = "", session: str = ""
) -> SignalRecord:
    """Minimal WFDB reader: format-16 little-endian samples, single .dat file."""
    header_path = Path(header_path)
    if not header_path.exists():
        raise IngestError(f"header file not found: {header_path}")
    lines = [
        ln.strip()
        for ln in header_path.read_text().splitlines()
        if ln.strip() and not ln.startswith("#")
    ]
    if not lines:
        raise IngestError(f"empty WFDB header: {header_path}")
    record_tokens = lines[0].split()
    if len(record_tokens) < 4:
        raise IngestError(f"malformed WFDB record line: {lines[0]!r}")
    n_signals = int(record_tokens[1])
    fs = float(record_tokens[2])
    n_samples = int(record_tokens[3])
    if len(lines) - 1 < n_signals:
        raise IngestError(f"header declares {n_signals} signals but has {len(lines) - 1} lines")

    dat_name = None
    gains = []
    baselines = []
    for sig_line in lines[1 : 1 + n_signals]:
        tokens = sig_line.split()
        fname, fmt = tokens[0], tokens[1]
        if fmt != "16":
            raise IngestError(f"unsupported WFDB format: {fmt!r} (only format 16 is supported)")
        if dat_name is None:
            dat_name = fname
        elif fname != dat_name:
            raise IngestError("multiple .dat files are not supported")
        gain, baseline = 200.0, 0.0  # WFDB defaults
        if len(tokens) > 2:
            spec = tokens[2].split("/")[0]
            if "(" in spec:
                gain_part, base_part = spec.split("(")
                gain = float(gain_part)
                baseline = float(base_part.rstrip(")"))
            else:
                gain = float(spec)
            if gain == 0:
                raise IngestError("gain of zero in WFDB header")
        gains.append(gain)
        baselines.append(baseline)

    dat_path = header_path.parent / dat_name
    if not dat_path.exists():
        raise IngestError(f"signal file not found: {dat_path}")
    raw = np.fromfile(dat_path, dtype="<i2")
    if raw.size < n_signals * n_samples:
        raise IngestError(
            f"truncated signal file: {dat_path} holds {raw.size} samples, "
            f"header declares {n_signals * n_samples}"
        )
    interleaved = raw[: n_signals * n_samples].reshape(n_samples, n_signals)
    physical = (interleaved.astype(np.float64) - np.asarray(baselines)) / np.asarray(gains)
    return SignalRecord(
        samples=physical.T, fs=fs, label=label, subject=subject, session=session
    )


def generate_synthetic(
    n_classes: int,
    n_channels: int,
    fs: float,
    trials_per_class: int,
    trial_seconds: float,
    seed: int,
) -> list[SignalRecord]:
    """Seeded synthetic dataset: per class, band-limited noise with a
    class-specific center frequency and per-channel gain profile.

    Deterministic for a fixed argument tuple; classes are separable by
    energy, spectral-moment, and subband features.
    """
    if min(n_classes, n_channels, trials_per_class) < 1 or trial_seconds <= 0:
        raise IngestError("all synthetic counts must be >= 1")
    if fs < 1000:
        raise IngestError(f"fs too low for the 450 Hz band edge: {fs}")
    rng = np.random.default_rng(seed)
    n = int(round(trial_seconds * fs))

    # Class-specific spectra: centers spread over the analysis band, plus a
    # random but seed-fixed per-channel gain profile.
    centers = np.linspace(60.0, min(380.0, 0.38 * fs), n_classes)
    widths = np.full(n_classes, 25.0)
    gains = 0.35 + 1.8 * rng.random((n_classes, n_channels))

    filters = [
        sps.butter(4, [c - w, c + w], btype="bandpass", fs=fs, output="sos")
        for c, w in zip(centers, widths)
    ]
    records = []
    for g in range(n_classes):
        for t in range(trials_per_class):
            noise = rng.standard_normal((n_channels, n))
            shaped = sps.sosfiltfilt(filters[g], noise, axis=1)
            shaped = shaped / (np.std(shaped, axis=1, keepdims=True) + 1e-12)
            samples = gains[g][:, None] * shaped + 0.05 * rng.standard_normal((n_channels, n))
            records.append(
                SignalRecord(
                    samples=samples,
                    fs=fs,
                    label=g,
                    subject="synthetic",
                    session=f"trial{t}",
                )
            )
    return records
