"""Brute-force Euclidean k-nearest-neighbors with documented tie-breaks."""
from __future__ import annotations

import numpy as np

from ..features.extract import FeatureMatrix
from .base import ClassifyError, TrainedModel


def knn_predict(
    train_values: np.ndarray,
    train_labels: np.ndarray,
    query: np.ndarray,
    k: int = 5,
) -> np.ndarray:
    """Majority vote among the k nearest training rows.

    Distance ties resolve toward the lower training-row index; class-count
    ties resolve to the class of the nearest neighbor among tied classes.
    """
    train_values = np.asarray(train_values, dtype=np.float64)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    query = np.atleast_2d(np.asarray(query, dtype=np.float64))
    n = train_values.shape[0]
    if n == 0:
        raise ClassifyError("empty training set")
    if not (1 <= k <= n):
        raise ClassifyError(f"k={k} out of range for {n} training rows")

    d2 = (
        np.sum(query**2, axis=1)[:, None]
        - 2.0 * query @ train_values.T
        + np.sum(train_values**2, axis=1)[None, :]
    )
    out = np.empty(query.shape[0], dtype=np.int64)
    idx = np.arange(n)
    for qi in range(query.shape[0]):
        order = np.lexsort((idx, d2[qi]))[:k]
        labels = train_labels[order]
        counts = np.bincount(labels)
        best = counts.max()
        tied = np.flatnonzero(counts == best)
        if tied.size == 1:
            out[qi] = tied[0]
        else:
            # nearest neighbor whose label belongs to the tied set
            out[qi] = labels[np.isin(labels, tied)][0]
    return out


class KnnModel(TrainedModel):
    kind = "knn"

    def __init__(self, train_values, train_labels, k, n_classes, seed=0):
        super().__init__(n_classes=n_classes, n_features=train_values.shape[1], seed=seed)
        self.train_values = np.asarray(train_values, dtype=np.float64)
        self.train_labels = np.asarray(train_labels, dtype=np.int64)
        self.k = int(k)

    def _predict(self, values: np.ndarray) -> np.ndarray:
        return knn_predict(self.train_values, self.train_labels, values, self.k)

    def to_blob(self) -> dict:
        return {
            **self._meta(),
            "k": self.k,
            "train_values": self.train_values.tolist(),
            "train_labels": self.train_labels.tolist(),
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "KnnModel":
        return cls(
            train_values=np.array(blob["train_values"], dtype=np.float64, ndmin=2),
            train_labels=np.array(blob["train_labels"]),
            k=blob["k"],
            n_classes=blob["n_classes"],
            seed=blob["seed"],
        )


def fit_knn(train: FeatureMatrix, k: int = 5, seed: int = 0) -> KnnModel:
    if train.n_rows == 0:
        raise ClassifyError("empty training set")
    if k > train.n_rows:
        raise ClassifyError(f"k={k} exceeds training size {train.n_rows}")
    return KnnModel(
        train_values=train.values,
        train_labels=train.labels,
        k=k,
        n_classes=int(train.labels.max()) + 1,
        seed=seed,
    )
