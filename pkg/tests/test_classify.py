from __future__ import annotations

import numpy as np
import pytest

from conftest import split_blobs
from emgbench.classify import (
    ClassifyError,
    Pipeline,
    Standardizer,
    TrainedModel,
    boost_round_weight,
    fit_adaboost_rf,
    fit_bagging,
    fit_knn,
    fit_linear_svm,
    fit_lda,
    fit_pipeline,
    fit_random_forest,
    fit_tree,
    knn_predict,
    voting_predict,
)
from emgbench.features.extract import FeatureMatrix


def fm(X, y):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return FeatureMatrix(
        values=X, feature_names=tuple(f"f{i}" for i in range(X.shape[1])), labels=y
    )


def gaussian_1d_blobs(rng, mean_sep=10.0, n=100):
    X = np.concatenate([rng.standard_normal(n) - mean_sep / 2, rng.standard_normal(n) + mean_sep / 2])
    y = np.repeat([0, 1], n)
    return fm(X[:, None], y)


class TestStandardizer:
    def test_three_point_column(self):
        s = Standardizer.fit(np.array([[1.0], [2.0], [3.0]]))
        assert s.mean[0] == pytest.approx(2.0)
        assert s.std[0] == pytest.approx(1.0)  # N-1 denominator
        np.testing.assert_allclose(s.apply(np.array([[1.0], [2.0], [3.0]])).ravel(), [-1, 0, 1])

    def test_constant_column_maps_to_zero(self):
        s = Standardizer.fit(np.array([[5.0], [5.0]]))
        np.testing.assert_array_equal(s.apply(np.array([[5.0], [7.0]])).ravel(), [0.0, 0.0])

    def test_width_mismatch(self):
        s = Standardizer.fit(np.ones((3, 2)))
        with pytest.raises(ClassifyError, match="mismatch"):
            s.apply(np.ones((3, 3)))

    def test_own_training_set_is_zero_mean_unit_std(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((40, 5)) * [1, 2, 3, 4, 5]
        out = Standardizer.fit(X).apply(X)
        assert np.max(np.abs(out.mean(axis=0))) < 1e-9
        assert np.max(np.abs(out.std(axis=0, ddof=1) - 1)) < 1e-9


class TestLda:
    def test_separated_gaussians_match_bayes_rule(self):
        rng = np.random.default_rng(1)
        train = gaussian_1d_blobs(rng)
        model = fit_lda(train)
        query = np.concatenate([rng.standard_normal(50) - 5, rng.standard_normal(50) + 5])
        expected = (query > 0).astype(int)  # Bayes rule for equal-prior symmetric blobs
        np.testing.assert_array_equal(model.predict(query[:, None]), expected)

    def test_feature_count_mismatch(self):
        rng = np.random.default_rng(2)
        model = fit_lda(fm(rng.standard_normal((20, 5)), np.repeat([0, 1], 10)))
        with pytest.raises(ClassifyError, match="mismatch"):
            model.predict(np.ones((1, 4)))

    def test_degenerate_duplicate_classes_tie_break_low(self):
        X = np.array([[1.0, 2.0], [3.0, 4.0], [1.0, 2.0], [3.0, 4.0]])
        model = fit_lda(fm(X, np.array([0, 0, 1, 1])))
        np.testing.assert_array_equal(model.predict(X), [0, 0, 0, 0])

    def test_class_with_single_sample_rejected(self):
        with pytest.raises(ClassifyError, match="fewer than 2"):
            fit_lda(fm(np.arange(6).reshape(3, 2), np.array([0, 0, 1])))

    def test_single_class_rejected(self):
        with pytest.raises(ClassifyError, match="single class"):
            fit_lda(fm(np.arange(8).reshape(4, 2), np.zeros(4, dtype=int)))

    def test_affine_rescaling_invariance(self, blob_data):
        train, test = split_blobs(blob_data)
        base = fit_lda(train).predict(test.values)
        scale = np.array([13.7, 1, 1, 0.01, 1, 1])
        scaled_train = fm(train.values * scale, train.labels)
        rescaled = fit_lda(scaled_train).predict(test.values * scale)
        np.testing.assert_array_equal(base, rescaled)


def knn_oracle(train_X, train_y, query, k):
    """Exhaustive double-loop reference with the stated tie-breaks."""
    out = []
    for q in query:
        dists = [(float(np.sum((q - x) ** 2)), i) for i, x in enumerate(train_X)]
        dists.sort()
        nearest = [train_y[i] for _, i in dists[:k]]
        counts = {}
        for lab in nearest:
            counts[lab] = counts.get(lab, 0) + 1
        best = max(counts.values())
        tied = {lab for lab, c in counts.items() if c == best}
        out.append(next(lab for lab in nearest if lab in tied))
    return np.array(out)


class TestKnn:
    def test_single_training_row(self):
        pred = knn_predict(np.array([[1.0, 2.0]]), np.array([3]), np.random.randn(5, 2), k=1)
        np.testing.assert_array_equal(pred, [3, 3, 3, 3, 3])

    def test_query_equals_training_row(self):
        X = np.array([[0.0], [5.0], [9.0]])
        pred = knn_predict(X, np.array([0, 1, 2]), np.array([[5.0]]), k=1)
        assert pred[0] == 1

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        X = rng.integers(0, 4, size=(200, 3)).astype(float)  # many exact distance ties
        y = rng.integers(0, 5, size=200)
        Q = rng.integers(0, 4, size=(60, 3)).astype(float)
        np.testing.assert_array_equal(knn_predict(X, y, Q, k=5), knn_oracle(X, y, Q, 5))

    def test_k_larger_than_train_rejected(self):
        with pytest.raises(ClassifyError, match="out of range"):
            knn_predict(np.ones((3, 1)), np.zeros(3, dtype=int), np.ones((1, 1)), k=4)

    def test_empty_training_set(self):
        with pytest.raises(ClassifyError, match="empty"):
            knn_predict(np.empty((0, 2)), np.empty(0, dtype=int), np.ones((1, 2)), k=1)


class TestLinearSvm:
    def test_separable_blobs_perfect_training_accuracy(self):
        rng = np.random.default_rng(3)
        X = np.vstack([rng.standard_normal((60, 2)), rng.standard_normal((60, 2)) + 10.0])
        y = np.repeat([0, 1], 60)
        model = fit_linear_svm(fm(X, y))
        assert np.mean(model.predict(X) == y) == 1.0

    def test_single_class_rejected(self):
        with pytest.raises(ClassifyError, match="single class"):
            fit_linear_svm(fm(np.random.randn(10, 2), np.zeros(10, dtype=int)))

    def test_probabilities_sum_to_one(self, blob_data):
        train, test = split_blobs(blob_data)
        model = fit_linear_svm(train)
        proba = model.predict_proba(test.values)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_array_equal(np.argmax(proba, axis=1), model.predict(test.values))

    def test_standardized_pipeline_robust_to_feature_scaling(self, blob_data):
        train, test = split_blobs(blob_data)
        acc = []
        for scale in (1.0, 10.0):
            strain = fm(train.values * scale, train.labels)
            stest = fm(test.values * scale, test.labels)
            pipe = fit_pipeline("svm", strain, seed=0)
            acc.append(np.mean(pipe.predict(stest.values) == stest.labels))
        assert abs(acc[0] - acc[1]) < 0.01

    def test_deterministic_per_seed(self, blob_data):
        train, test = split_blobs(blob_data)
        a = fit_linear_svm(train, seed=4).predict(test.values)
        b = fit_linear_svm(train, seed=4).predict(test.values)
        np.testing.assert_array_equal(a, b)


class TestTreeAndForest:
    def test_single_tree_reproduces_hand_traced_splits(self):
        # one feature, perfect cut between 1 and 10 at threshold 5.5
        train = fm(np.array([[0.0], [1.0], [10.0], [11.0]]), np.array([0, 0, 1, 1]))
        model = fit_random_forest(train, n_trees=1, seed=0, bootstrap=False)
        tree = model.trees[0]
        assert tree.feature[0] == 0
        assert tree.threshold[0] == pytest.approx(5.5)
        np.testing.assert_array_equal(model.predict(np.array([[5.0], [6.0]])), [0, 1])
        np.testing.assert_array_equal(model.predict(train.values), train.labels)

    def test_pure_node_becomes_leaf(self):
        X = np.array([[0.0], [1.0]])
        tree = fit_tree(X, np.array([1, 1]), 2, np.random.default_rng(0))
        assert tree.feature[0] == -1
        assert tree.leaf_label[0] == 1

    def test_held_out_accuracy_on_separable_blobs(self, blob_data):
        train, test = split_blobs(blob_data)
        model = fit_random_forest(train, n_trees=50, seed=1)
        assert np.mean(model.predict(test.values) == test.labels) >= 0.95

    def test_training_accuracy_at_least_held_out(self, blob_data):
        train, test = split_blobs(blob_data)
        model = fit_random_forest(train, n_trees=50, seed=1)
        train_acc = np.mean(model.predict(train.values) == train.labels)
        test_acc = np.mean(model.predict(test.values) == test.labels)
        assert train_acc >= test_acc

    def test_same_seed_identical_predictions(self, blob_data):
        train, test = split_blobs(blob_data)
        a = fit_random_forest(train, n_trees=10, seed=9).predict(test.values)
        b = fit_random_forest(train, n_trees=10, seed=9).predict(test.values)
        np.testing.assert_array_equal(a, b)

    def test_empty_training_set(self):
        empty = FeatureMatrix(values=np.empty((0, 2)), feature_names=("a", "b"),
                              labels=np.empty(0, dtype=int))
        with pytest.raises(ClassifyError, match="empty"):
            fit_random_forest(empty, n_trees=1, seed=0)


class TestBagging:
    def test_identity_hook_equals_bare_base(self, blob_data):
        train, test = split_blobs(blob_data)
        strain = fm(Standardizer.fit(train.values).apply(train.values), train.labels)
        bagged = fit_bagging("knn", strain, n_estimators=1, seed=0, bootstrap=False)
        bare = fit_knn(strain, k=5)
        q = Standardizer.fit(train.values).apply(test.values)
        np.testing.assert_array_equal(bagged.predict(q), bare.predict(q))

    def test_bagged_knn_close_to_bare_knn(self, blob_data):
        train, test = split_blobs(blob_data)
        bare = fit_pipeline("knn", train, seed=0)
        bagged = fit_pipeline("bagging_knn", train, seed=0)
        acc_bare = np.mean(bare.predict(test.values) == test.labels)
        acc_bag = np.mean(bagged.predict(test.values) == test.labels)
        assert acc_bag >= acc_bare - 0.02

    def test_same_seed_identical(self, blob_data):
        train, test = split_blobs(blob_data)
        a = fit_bagging("knn", train, seed=5).predict(test.values)
        b = fit_bagging("knn", train, seed=5).predict(test.values)
        np.testing.assert_array_equal(a, b)

    def test_unsupported_base(self, blob_data):
        with pytest.raises(ClassifyError, match="unsupported bagging base"):
            fit_bagging("lda", blob_data, seed=0)


class TestAdaBoost:
    def test_boost_round_weight_boundaries(self):
        alpha, keep_going = boost_round_weight(0.5, 2)  # at 1 - 1/K
        assert alpha == 0.0 and not keep_going
        alpha, keep_going = boost_round_weight(0.0, 4)
        assert not keep_going
        alpha, keep_going = boost_round_weight(0.2, 4)
        assert keep_going
        assert alpha == pytest.approx(np.log(0.8 / 0.2) + np.log(3))

    def test_perfect_first_round_single_member(self, blob_data):
        train, test = split_blobs(blob_data)
        model = fit_adaboost_rf(train, n_rounds=10, seed=0)
        # separable blobs: the first forest is perfect, boosting stops
        assert len(model.members) == 1
        np.testing.assert_array_equal(
            model.predict(test.values), model.members[0].predict(test.values)
        )

    def test_not_much_worse_than_plain_forest(self, blob_data):
        train, test = split_blobs(blob_data)
        rf_acc = np.mean(
            fit_random_forest(train, n_trees=25, seed=3).predict(test.values) == test.labels
        )
        ada_acc = np.mean(
            fit_adaboost_rf(train, n_rounds=3, seed=3).predict(test.values) == test.labels
        )
        assert ada_acc >= rf_acc - 0.02


class _ConstantModel(TrainedModel):
    kind = "constant"

    def __init__(self, label, n_classes=3, n_features=2):
        super().__init__(n_classes=n_classes, n_features=n_features)
        self.label = label

    def _predict(self, values):
        return np.full(values.shape[0], self.label, dtype=np.int64)


class TestVoting:
    def test_unanimous(self):
        models = [_ConstantModel(2) for _ in range(3)]
        np.testing.assert_array_equal(voting_predict(models, np.zeros((4, 2))), [2, 2, 2, 2])

    def test_three_way_tie_breaks_low(self):
        models = [_ConstantModel(2), _ConstantModel(0), _ConstantModel(1)]
        np.testing.assert_array_equal(voting_predict(models, np.zeros((2, 2))), [0, 0])

    def test_three_copies_equal_single_model(self, blob_data):
        train, test = split_blobs(blob_data)
        knn = fit_knn(train, k=5)
        np.testing.assert_array_equal(
            voting_predict([knn, knn, knn], test.values), knn.predict(test.values)
        )

    def test_inconsistent_class_counts_rejected(self):
        with pytest.raises(ClassifyError, match="class count"):
            voting_predict([_ConstantModel(0, n_classes=2), _ConstantModel(0, n_classes=3)],
                           np.zeros((1, 2)))

    def test_fewer_than_two_models_rejected(self):
        with pytest.raises(ClassifyError, match="at least 2"):
            voting_predict([_ConstantModel(0)], np.zeros((1, 2)))


class TestPipelineSerialization:
    @pytest.mark.parametrize(
        "name",
        ["lda", "svm", "knn", "random_forest", "voting", "bagging_knn", "bagging_svm", "adaboost"],
    )
    def test_round_trip_preserves_predictions(self, name, blob_data, tmp_path):
        train, test = split_blobs(blob_data)
        pipe = fit_pipeline(name, train, seed=2, rf_trees=10, boost_rounds=2, boost_trees=5)
        path = tmp_path / f"{name}.json"
        pipe.save(path)
        loaded = Pipeline.load(path)
        np.testing.assert_array_equal(loaded.predict(test.values), pipe.predict(test.values))

    def test_unknown_model_name(self, blob_data):
        with pytest.raises(ClassifyError, match="unknown model"):
            fit_pipeline("cnn", blob_data)
