"""Shared black-box classifier interface.

Every family exposes ``predict_proba`` over single vectors or row
matrices; ``predict`` is always the argmax of ``predict_proba`` with
ties broken toward the lowest class id, so the two can never disagree.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np

FAMILIES = ("knn", "rf", "nn", "svm")


def training_fingerprint(
    family: str, X: np.ndarray, y: np.ndarray, hyperparameters: dict, seed: int
) -> str:
    """Hash of everything that determines the fitted state."""
    h = hashlib.sha256()
    h.update(family.encode())
    h.update(np.ascontiguousarray(X, dtype=float).tobytes())
    h.update(np.ascontiguousarray(y, dtype=np.int64).tobytes())
    h.update(json.dumps(hyperparameters, sort_keys=True, default=str).encode())
    h.update(str(seed).encode())
    return h.hexdigest()


def check_input(x: np.ndarray, feature_count: int) -> tuple[np.ndarray, bool]:
    """Coerce input to a (n, d) float matrix; returns (matrix, was_vector)."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != feature_count:
        raise ValueError(
            f"expected vectors of length {feature_count}, got shape {np.asarray(x).shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite feature value in input")
    return arr, single


class ClassifierModel:
    """Base for the four fitted model families.

    Immutable after fit; safe for concurrent prediction.
    """

    family: str = ""

    def __init__(
        self,
        hyperparameters: dict,
        class_count: int,
        feature_count: int,
        fingerprint: str,
    ) -> None:
        self.hyperparameters = dict(hyperparameters)
        self.class_count = int(class_count)
        self.feature_count = int(feature_count)
        self.training_fingerprint = fingerprint

    # subclasses implement the batch path
    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Per-class probability vector(s); rows sum to 1."""
        X, single = check_input(x, self.feature_count)
        proba = self._proba_matrix(X)
        return proba[0] if single else proba

    def predict(self, x: np.ndarray):
        """Class id(s): argmax of predict_proba, lowest id on ties."""
        X, single = check_input(x, self.feature_count)
        proba = self._proba_matrix(X)
        pred = np.argmax(proba, axis=1)  # np.argmax returns the first (lowest) index on ties
        return int(pred[0]) if single else pred

    # serialization hooks -------------------------------------------------
    def _state_arrays(self) -> dict[str, np.ndarray]:
        raise NotImplementedError

    @classmethod
    def _from_state(
        cls, meta: dict[str, Any], arrays: dict[str, np.ndarray]
    ) -> "ClassifierModel":
        raise NotImplementedError


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted for numerical stability."""
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)
