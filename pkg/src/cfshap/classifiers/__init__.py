"""Four classifier families behind one black-box prediction interface.

``fit`` dispatches on family name; all models share ``predict`` /
``predict_proba`` and a training fingerprint that makes equal-input fits
interchangeable. ``save_model`` / ``load_model`` round-trip fitted
models through a versioned npz container.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np

from ..errors import ModelFormatError
from .base import FAMILIES, ClassifierModel, training_fingerprint
from .forest import RandomForestModel
from .knn import KnnModel
from .neural import NeuralNetModel
from .svm import LinearSvmModel

__all__ = [
    "FAMILIES",
    "ClassifierModel",
    "DEFAULT_HYPERPARAMETERS",
    "fit",
    "save_model",
    "load_model",
]

MODEL_FILE_VERSION = 1

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "knn": {"k": 5},
    "rf": {"n_trees": 100, "max_depth": 8},
    "nn": {"hidden_units": 16, "tolerance": 1e-6, "max_iterations": 2000},
    "svm": {"l2": 1e-3, "iterations": 2000, "learning_rate": 0.5, "decay_steps": 200.0},
}

_CLASSES: dict[str, type[ClassifierModel]] = {
    "knn": KnnModel,
    "rf": RandomForestModel,
    "nn": NeuralNetModel,
    "svm": LinearSvmModel,
}


def fit(
    family: str,
    X: np.ndarray,
    y: np.ndarray,
    hyperparameters: dict | None = None,
    seed: int = 0,
    n_classes: int | None = None,
) -> ClassifierModel:
    """Train one model family on (X, y); deterministic under seed."""
    if family not in _CLASSES:
        raise ValueError(f"unknown classifier family {family!r}; choose from {FAMILIES}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training matrix must be non-empty and 2-D")
    if X.shape[0] != y.shape[0]:
        raise ValueError("row count of X must match length of y")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if np.unique(y).size < 2:
        raise ValueError("degenerate training set: only one class present")
    params = dict(DEFAULT_HYPERPARAMETERS[family])
    if hyperparameters:
        unknown = set(hyperparameters) - set(params)
        if unknown:
            raise ValueError(f"invalid hyperparameters for {family}: {sorted(unknown)}")
        params.update(hyperparameters)
    _validate_params(family, params)
    fp = training_fingerprint(family, X, y, params, seed)
    if family == "knn":
        return KnnModel(X, y, params, n_classes, fp)
    return _CLASSES[family].fit(X, y, params, n_classes, seed, fp)  # type: ignore[attr-defined]


def _validate_params(family: str, params: dict) -> None:
    positive = {
        "knn": ["k"],
        "rf": ["n_trees", "max_depth"],
        "nn": ["hidden_units", "max_iterations"],
        "svm": ["iterations"],
    }[family]
    for key in positive:
        if int(params[key]) < 1:
            raise ValueError(f"{family} hyperparameter {key} must be >= 1")


def save_model(model: ClassifierModel, path: str | Path) -> None:
    """Write a fitted model to a versioned binary container."""
    meta = {
        "version": MODEL_FILE_VERSION,
        "family": model.family,
        "hyperparameters": model.hyperparameters,
        "class_count": model.class_count,
        "feature_count": model.feature_count,
        "fingerprint": model.training_fingerprint,
    }
    arrays = model._state_arrays()
    buf = io.BytesIO()
    np.savez(buf, _meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8), **arrays)
    Path(path).write_bytes(buf.getvalue())


def load_model(path: str | Path) -> ClassifierModel:
    """Load a model saved by :func:`save_model`; refuses other versions."""
    try:
        with np.load(Path(path)) as data:
            meta = json.loads(bytes(data["_meta"].tobytes()).decode())
            arrays = {k: data[k] for k in data.files if k != "_meta"}
    except (OSError, ValueError, KeyError) as exc:
        raise ModelFormatError(f"unreadable model file {path}: {exc}") from exc
    version = meta.get("version")
    if version != MODEL_FILE_VERSION:
        raise ModelFormatError(
            f"unsupported model file version {version} (expected {MODEL_FILE_VERSION})"
        )
    family = meta["family"]
    if family not in _CLASSES:
        raise ModelFormatError(f"unknown family in model file: {family!r}")
    return _CLASSES[family]._from_state(meta, arrays)
