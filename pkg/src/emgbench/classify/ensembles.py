"""Ensembles: bagging over KNN/SVM, multi-class boosting over random
forests, and hard majority voting."""
from __future__ import annotations

import numpy as np

from ..features.extract import FeatureMatrix
from .base import ClassifyError, TrainedModel, majority_vote
from .forest import RandomForestModel, fit_random_forest
from .knn import KnnModel, fit_knn
from .svm import LinearSvmModel, fit_linear_svm

_BASE_FITTERS = {
    "knn": fit_knn,
    "svm": fit_linear_svm,
}
_BASE_CLASSES = {
    "knn": KnnModel,
    "svm": LinearSvmModel,
    "random_forest": RandomForestModel,
}


class BaggingModel(TrainedModel):
    kind = "bagging"

    def __init__(self, base_kind, members, n_classes, n_features, seed=0):
        super().__init__(n_classes=n_classes, n_features=n_features, seed=seed)
        self.base_kind = base_kind
        self.members = list(members)

    def _predict(self, values: np.ndarray) -> np.ndarray:
        votes = np.vstack([m.predict(values) for m in self.members])
        return majority_vote(votes, self.n_classes)

    def to_blob(self) -> dict:
        return {
            **self._meta(),
            "base_kind": self.base_kind,
            "members": [m.to_blob() for m in self.members],
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "BaggingModel":
        member_cls = _BASE_CLASSES[blob["base_kind"]]
        return cls(
            base_kind=blob["base_kind"],
            members=[member_cls.from_blob(m) for m in blob["members"]],
            n_classes=blob["n_classes"],
            n_features=blob["n_features"],
            seed=blob["seed"],
        )


def fit_bagging(
    base: str,
    train: FeatureMatrix,
    n_estimators: int = 10,
    seed: int = 0,
    bootstrap: bool = True,
) -> BaggingModel:
    """Bootstrap-resampled base learners with majority voting.

    `bootstrap=False` is a test hook that fits every member on the
    untouched training set."""
    if base not in _BASE_FITTERS:
        raise ClassifyError(f"unsupported bagging base: {base!r}")
    if n_estimators < 1:
        raise ClassifyError(f"n_estimators must be >= 1, got {n_estimators}")
    if train.n_rows == 0:
        raise ClassifyError("empty training set")
    fitter = _BASE_FITTERS[base]
    n = train.n_rows
    members = []
    seeds = np.random.SeedSequence(seed).spawn(n_estimators)
    for ss in seeds:
        rng = np.random.default_rng(ss)
        idx = rng.choice(n, size=n, replace=True) if bootstrap else np.arange(n)
        members.append(fitter(train.select(idx), seed=int(ss.generate_state(1)[0] % 2**31)))
    return BaggingModel(
        base_kind=members[0].kind,
        members=members,
        n_classes=int(train.labels.max()) + 1,
        n_features=train.n_features,
        seed=seed,
    )


def boost_round_weight(error: float, n_classes: int) -> tuple[float, bool]:
    """Multi-class (SAMME) learner weight and whether boosting continues.

    Rounds with error >= 1 - 1/K carry no information and stop the loop;
    zero-error rounds also stop, keeping the perfect learner.
    """
    if error >= 1.0 - 1.0 / n_classes:
        return 0.0, False
    if error <= 0.0:
        return 1.0, False
    alpha = np.log((1.0 - error) / error) + np.log(n_classes - 1.0)
    return float(alpha), True


class AdaBoostModel(TrainedModel):
    kind = "adaboost_rf"

    def __init__(self, members, alphas, n_classes, n_features, seed=0):
        super().__init__(n_classes=n_classes, n_features=n_features, seed=seed)
        self.members = list(members)
        self.alphas = np.asarray(alphas, dtype=np.float64)

    def _predict(self, values: np.ndarray) -> np.ndarray:
        votes = np.vstack([m.predict(values) for m in self.members])
        return majority_vote(votes, self.n_classes, weights=self.alphas)

    def to_blob(self) -> dict:
        return {
            **self._meta(),
            "alphas": self.alphas.tolist(),
            "members": [m.to_blob() for m in self.members],
        }

    @classmethod
    def from_blob(cls, blob: dict) -> "AdaBoostModel":
        return cls(
            members=[RandomForestModel.from_blob(m) for m in blob["members"]],
            alphas=np.array(blob["alphas"]),
            n_classes=blob["n_classes"],
            n_features=blob["n_features"],
            seed=blob["seed"],
        )


def fit_adaboost_rf(
    train: FeatureMatrix,
    n_rounds: int = 10,
    seed: int = 0,
    trees_per_round: int = 25,
) -> AdaBoostModel:
    """Boosted random forests: each round fits a forest on a weighted
    bootstrap of the training data and is weighted by the SAMME rule."""
    if n_rounds < 1:
        raise ClassifyError(f"n_rounds must be >= 1, got {n_rounds}")
    if train.n_rows == 0:
        raise ClassifyError("empty training set")
    X, y = train.values, train.labels
    n = train.n_rows
    n_classes = int(y.max()) + 1
    w = np.full(n, 1.0 / n)
    members, alphas = [], []
    seeds = np.random.SeedSequence(seed).spawn(n_rounds)
    for r, ss in enumerate(seeds):
        member = fit_random_forest(
            train,
            n_trees=trees_per_round,
            seed=int(ss.generate_state(1)[0] % 2**31),
            sample_weights=w,
        )
        miss = member.predict(X) != y
        error = float(np.sum(w[miss]))
        alpha, keep_going = boost_round_weight(error, n_classes)
        if alpha > 0 or not members:
            members.append(member)
            alphas.append(alpha if alpha > 0 else 1.0)
        if not keep_going:
            break
        w = w * np.exp(alpha * miss)
        w = w / np.sum(w)
    return AdaBoostModel(
        members=members,
        alphas=alphas,
        n_classes=n_classes,
        n_features=train.n_features,
        seed=seed,
    )


def voting_predict(models: list[TrainedModel], query: np.ndarray) -> np.ndarray:
    """Hard majority vote across fitted members; ties to the lower class."""
    if len(models) < 2:
        raise ClassifyError("voting needs at least 2 models")
    n_classes = models[0].n_classes
    n_features = models[0].n_features
    for m in models[1:]:
        if m.n_classes != n_classes:
            raise ClassifyError("voting members disagree in class count")
        if m.n_features != n_features:
            raise ClassifyError("voting members disagree in feature count")
    votes = np.vstack([m.predict(query) for m in models])
    return majority_vote(votes, n_classes)
