"""Random forest: bootstrapped Gini trees with sqrt(d) feature sampling."""
from __future__ import annotations

import numpy as np

from ..features.extract import FeatureMatrix
from .base import ClassifyError, TrainedModel, majority_vote
from .tree import DecisionTree, fit_tree


class RandomForestModel(TrainedModel):
    kind = "random_forest"

    def __init__(self, trees, n_classes, n_features, seed=0):
        super().__init__(n_classes=n_classes, n_features=n_features, seed=seed)
        self.trees = list(trees)

    def _predict(self, values: np.ndarray) -> np.ndarray:
        votes = np.vstack([t.predict(values) for t in self.trees])
        return majority_vote(votes, self.n_classes)

    def to_blob(self) -> dict:
        return {**self._meta(), "trees": [t.to_blob() for t in self.trees]}

    @classmethod
    def from_blob(cls, blob: dict) -> "RandomForestModel":
        return cls(
            trees=[DecisionTree.from_blob(t) for t in blob["trees"]],
            n_classes=blob["n_classes"],
            n_features=blob["n_features"],
            seed=blob["seed"],
        )


def fit_random_forest(
    train: FeatureMatrix,
    n_trees: int = 100,
    seed: int = 0,
    bootstrap: bool = True,
    sample_weights: np.ndarray | None = None,
) -> RandomForestModel:
    """Bootstrap per tree (optionally weighted), floor(sqrt(d)) candidate
    features per split. `bootstrap=False` is a test hook that trains every
    tree on the full sample."""
    if n_trees < 1:
        raise ClassifyError(f"n_trees must be >= 1, got {n_trees}")
    X, y = train.values, train.labels
    n, d = X.shape
    if n == 0:
        raise ClassifyError("empty training set")
    n_classes = int(y.max()) + 1
    max_features = max(1, int(np.floor(np.sqrt(d))))
    seeds = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    for ss in seeds:
        rng = np.random.default_rng(ss)
        if bootstrap:
            idx = rng.choice(n, size=n, replace=True, p=sample_weights)
        else:
            idx = np.arange(n)
        trees.append(fit_tree(X[idx], y[idx], n_classes, rng, max_features))
    return RandomForestModel(trees=trees, n_classes=n_classes, n_features=d, seed=seed)
