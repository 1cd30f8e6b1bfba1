"""Window-set feature extraction into a named feature matrix."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..preprocess import WindowSet
from .tdd import FeatureError, TddParams, ftdd_names, ftdd_window, tsd_names, tsd_window
from .wavelet import WaveletFilter, dwt, wavelet_features, wavelet_names

FAMILIES = ("ftdd", "tsd", "wavelet")


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows = windows, columns = named features, plus a label vector."""

    values: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        if values.ndim != 2 or values.shape[1] != len(self.feature_names):
            raise FeatureError(
                f"values shape {values.shape} does not match {len(self.feature_names)} names"
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise FeatureError("feature names are not unique")
        if values.shape[0] != labels.size:
            raise FeatureError("row count does not match label count")
        if not np.all(np.isfinite(values)):
            raise FeatureError("feature matrix contains non-finite values")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def select(self, indices: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(
            values=self.values[indices],
            feature_names=self.feature_names,
            labels=self.labels[indices],
        )

    def to_csv(self, path: str | Path) -> None:
        header = ",".join([*self.feature_names, "label"])
        body = np.column_stack([self.values, self.labels.astype(np.float64)])
        np.savetxt(path, body, fmt="%.17g", delimiter=",", header=header, comments="")

    @classmethod
    def from_csv(cls, path: str | Path) -> "FeatureMatrix":
        path = Path(path)
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        if not header or header[-1] != "label":
            raise FeatureError(f"feature CSV {path} lacks a trailing label column")
        body = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(
            values=body[:, :-1],
            feature_names=tuple(header[:-1]),
            labels=body[:, -1].astype(np.int64),
        )


def extract(
    ws: WindowSet,
    family: str,
    params: TddParams | None = None,
    levels: int = 5,
    entropy_guard: float = 1e-12,
) -> FeatureMatrix:
    """One feature row per window for the requested descriptor family."""
    if family not in FAMILIES:
        raise FeatureError(f"unknown feature family: {family!r} (expected one of {FAMILIES})")
    if len(ws) == 0:
        raise FeatureError("empty window set")
    params = params or TddParams()
    n_ch = ws.n_channels

    if family == "ftdd":
        names = ftdd_names(n_ch)
        rows = [ftdd_window(w.samples, params) for w in ws.windows]
    elif family == "tsd":
        names = tsd_names(n_ch)
        rows = [tsd_window(w.samples, params) for w in ws.windows]
    else:
        filt = WaveletFilter.sym8()
        names = wavelet_names(n_ch, levels)
        rows = [
            np.concatenate(
                [
                    wavelet_features(dwt(ch, filt, levels), entropy_guard)
                    for ch in w.samples
                ]
            )
            for w in ws.windows
        ]

    return FeatureMatrix(
        values=np.vstack(rows), feature_names=tuple(names), labels=ws.labels
    )
