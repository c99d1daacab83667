"""Shared fixtures: reference data, trained models, stub classifiers."""

from __future__ import annotations

import numpy as np
import pytest

import cfshap as cf
from cfshap.classifiers.base import ClassifierModel


class ConstantModel(ClassifierModel):
    """Stub emitting one fixed probability vector everywhere."""

    family = "stub"

    def __init__(self, proba, feature_count):
        proba = np.asarray(proba, dtype=float)
        super().__init__({}, proba.size, feature_count, f"constant-{proba.tolist()}")
        self._proba = proba

    def _proba_matrix(self, X):
        return np.tile(self._proba, (X.shape[0], 1))


class FunctionModel(ClassifierModel):
    """Stub wrapping an arbitrary row-wise probability function."""

    family = "stub"

    def __init__(self, fn, class_count, feature_count, name="fn"):
        super().__init__({}, class_count, feature_count, f"stub-{name}")
        self._fn = fn

    def _proba_matrix(self, X):
        return np.asarray(self._fn(X), dtype=float)


@pytest.fixture(scope="session")
def iris():
    return cf.load_builtin("iris")


@pytest.fixture(scope="session")
def iris_split(iris):
    return cf.split(iris, 0.8, 42, stratified=True)


@pytest.fixture(scope="session")
def iris_std(iris, iris_split):
    return cf.standardize(iris, iris_split)


@pytest.fixture(scope="session")
def iris_train(iris_std, iris_split):
    X = iris_std.points[iris_split.train_indices]
    y = iris_std.labels[iris_split.train_indices]
    return X, y


@pytest.fixture(scope="session")
def iris_models(iris_train):
    X, y = iris_train
    return {family: cf.fit(family, X, y, seed=42) for family in cf.FAMILIES}


@pytest.fixture(scope="session")
def iris_background(iris_train):
    X, y = iris_train
    return cf.select_background(X, y, 100, 42)


@pytest.fixture
def constant_model():
    return ConstantModel


@pytest.fixture
def function_model():
    return FunctionModel
