"""Classifier families: contracts, determinism, sanity accuracy."""

import numpy as np
import pytest

import cfshap as cf
from cfshap.classifiers import load_model, save_model
from cfshap.classifiers.forest import RandomForestModel
from cfshap.errors import ModelFormatError


def make_blobs(seed=0, n_per=40, margin=4.0):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 1.0, size=(n_per, 2))
    b = rng.normal(0.0, 1.0, size=(n_per, 2)) + np.array([margin, margin])
    X = np.vstack([a, b])
    y = np.array([0] * n_per + [1] * n_per)
    return X, y


class TestFit:
    def test_metadata_passthrough(self, iris_models):
        model = iris_models["knn"]
        assert model.class_count == 3
        assert model.feature_count == 4
        assert model.hyperparameters["k"] == 5

    def test_rf_determinism(self, iris_train, iris_std, iris_split):
        X, y = iris_train
        test = iris_std.points[iris_split.test_indices]
        a = cf.fit("rf", X, y, seed=42)
        b = cf.fit("rf", X, y, seed=42)
        assert a.training_fingerprint == b.training_fingerprint
        assert np.array_equal(a.predict_proba(test), b.predict_proba(test))

    def test_svm_separable_blobs_train_accuracy(self):
        X, y = make_blobs(margin=4.0)
        model = cf.fit("svm", X, y, seed=0)
        assert np.mean(model.predict(X) == y) == 1.0

    def test_unknown_family(self, iris_train):
        X, y = iris_train
        with pytest.raises(ValueError, match="unknown classifier family"):
            cf.fit("boost", X, y)

    def test_invalid_hyperparameters(self, iris_train):
        X, y = iris_train
        with pytest.raises(ValueError, match="invalid hyperparameters"):
            cf.fit("knn", X, y, hyperparameters={"neighbors": 3})
        with pytest.raises(ValueError, match="must be >= 1"):
            cf.fit("knn", X, y, hyperparameters={"k": 0})

    def test_single_class_training_rejected(self):
        X = np.random.default_rng(0).normal(size=(10, 2))
        with pytest.raises(ValueError, match="one class"):
            cf.fit("knn", X, np.zeros(10, dtype=int))


class TestPredict:
    def test_iris_worked_point_is_class_0(self, iris_std, iris_models):
        point = iris_std.to_standardized(np.array([4.4, 2.9, 1.4, 0.2]))
        for family, model in iris_models.items():
            assert model.predict(point) == 0, family

    def test_constant_model(self, constant_model):
        model = constant_model([0.0, 0.0, 1.0], feature_count=2)
        assert model.predict(np.array([5.0, -3.0])) == 2
        assert np.array_equal(model.predict_proba(np.array([1.0, 1.0])), [0, 0, 1])

    def test_knn_k1_returns_training_label(self, iris_train):
        X, y = iris_train
        model = cf.fit("knn", X, y, hyperparameters={"k": 1}, seed=0)
        for i in (0, 17, 61, 104):
            assert model.predict(X[i]) == y[i]

    def test_dimension_mismatch(self, iris_models):
        with pytest.raises(ValueError, match="length 4"):
            iris_models["svm"].predict(np.array([1.0, 2.0]))

    def test_non_finite_input(self, iris_models):
        with pytest.raises(ValueError, match="non-finite"):
            iris_models["svm"].predict(np.array([1.0, np.nan, 0.0, 0.0]))


class TestPredictProba:
    def test_knn_unanimous_vote(self):
        X = np.array([[0.0], [0.1], [0.2], [0.3], [0.4], [10.0], [11.0], [12.0], [13.0], [14.0]])
        y = np.array([1, 1, 1, 1, 1, 0, 0, 0, 0, 0])
        model = cf.fit("knn", X, y, seed=0)
        proba = model.predict_proba(np.array([0.2]))
        assert proba.tolist() == [0.0, 1.0]

    def test_rf_probability_is_mean_of_leaf_distributions(self):
        # three hand-built stumps on one feature; query x=0.5 lands in the
        # left leaf of trees 1 and 2 and the right leaf of tree 3
        def stump(threshold, left_proba, right_proba):
            return (
                np.array([0, -1, -1]),
                np.array([threshold, 0.0, 0.0]),
                np.array([1, -1, -1]),
                np.array([2, -1, -1]),
                np.array([[0.5, 0.5], left_proba, right_proba]),
            )

        trees = [
            stump(1.0, [0.9, 0.1], [0.2, 0.8]),
            stump(2.0, [0.6, 0.4], [0.1, 0.9]),
            stump(0.0, [1.0, 0.0], [0.3, 0.7]),
        ]
        model = RandomForestModel(trees, {"n_trees": 3, "max_depth": 1}, 2, 1, "hand")
        proba = model.predict_proba(np.array([0.5]))
        expected = np.mean([[0.9, 0.1], [0.6, 0.4], [0.3, 0.7]], axis=0)
        assert np.allclose(proba, expected, atol=1e-12)

    @pytest.mark.parametrize("family", cf.FAMILIES)
    def test_simplex(self, iris_models, family):
        rng = np.random.default_rng(11)
        X = rng.normal(0.0, 2.0, size=(500, 4))
        proba = iris_models[family].predict_proba(X)
        assert proba.min() >= 0.0
        assert np.abs(proba.sum(axis=1) - 1.0).max() < 1e-9

    @pytest.mark.parametrize("family", cf.FAMILIES)
    def test_argmax_consistency(self, iris_models, family):
        rng = np.random.default_rng(29)
        X = rng.normal(0.0, 2.0, size=(1000, 4))
        model = iris_models[family]
        proba = model.predict_proba(X)
        # argmax with lowest-id tie-break, computed independently
        expected = np.argmax(proba, axis=1)
        assert np.array_equal(model.predict(X), expected)

    def test_knn_distance_tie_breaks_by_training_index(self):
        X = np.array([[1.0], [-1.0], [50.0]])
        y = np.array([0, 1, 1])
        model = cf.fit("knn", X, y, hyperparameters={"k": 1}, seed=0)
        # query 0 is equidistant from rows 0 and 1; row 0 wins
        assert model.predict(np.array([0.0])) == 0

    def test_fingerprint_equality_implies_identical_outputs(self, iris_train, iris_std):
        X, y = iris_train
        a = cf.fit("nn", X, y, seed=9)
        b = cf.fit("nn", X, y, seed=9)
        assert a.training_fingerprint == b.training_fingerprint
        probe = iris_std.points[:20]
        assert np.array_equal(a.predict_proba(probe), b.predict_proba(probe))


class TestSanityAccuracy:
    @pytest.mark.parametrize("family", cf.FAMILIES)
    def test_iris_accuracy_at_least_90(self, family, iris_models, iris_std, iris_split):
        model = iris_models[family]
        X = iris_std.points[iris_split.test_indices]
        y = iris_std.labels[iris_split.test_indices]
        accuracy = float(np.mean(model.predict(X) == y))
        assert accuracy >= 0.90, f"{family}: {accuracy:.3f}"


class TestSerialization:
    @pytest.mark.parametrize("family", cf.FAMILIES)
    def test_round_trip(self, family, iris_models, iris_std, tmp_path):
        model = iris_models[family]
        path = tmp_path / f"{family}.model"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.family == model.family
        assert loaded.training_fingerprint == model.training_fingerprint
        probe = iris_std.points[:25]
        assert np.array_equal(loaded.predict_proba(probe), model.predict_proba(probe))

    def test_version_mismatch_refused(self, iris_models, tmp_path, monkeypatch):
        path = tmp_path / "old.model"
        import cfshap.classifiers as clf

        monkeypatch.setattr(clf, "MODEL_FILE_VERSION", 99)
        save_model(iris_models["knn"], path)
        monkeypatch.undo()
        with pytest.raises(ModelFormatError, match="version 99"):
            load_model(path)

    def test_garbage_file_refused(self, tmp_path):
        path = tmp_path / "junk.model"
        path.write_bytes(b"this is not a model")
        with pytest.raises(ModelFormatError):
            load_model(path)
