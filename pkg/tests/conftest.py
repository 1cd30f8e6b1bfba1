from __future__ import annotations

import numpy as np
import pytest

from emgbench.features.extract import FeatureMatrix


@pytest.fixture(scope="session")
def blob_data():
    """Four well-separated Gaussian blobs in 6 dimensions."""
    rng = np.random.default_rng(12345)
    centers = 8.0 * rng.standard_normal((4, 6))
    X = np.vstack([rng.standard_normal((50, 6)) + c for c in centers])
    y = np.repeat(np.arange(4), 50)
    perm = rng.permutation(len(y))
    return FeatureMatrix(
        values=X[perm],
        feature_names=tuple(f"f{i}" for i in range(6)),
        labels=y[perm],
    )


def split_blobs(fm: FeatureMatrix, train_frac: float = 0.8):
    n_train = int(train_frac * fm.n_rows)
    idx = np.arange(fm.n_rows)
    return fm.select(idx[:n_train]), fm.select(idx[n_train:])
