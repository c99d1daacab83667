"""Single-hidden-layer softmax network trained full-batch with L-BFGS.

Architecture: d -> hidden (tanh) -> C (softmax), cross-entropy loss.
Training runs scipy's L-BFGS-B on the flattened weights until the loss
delta falls below tolerance or the iteration cap is hit; with a seeded
initialization the fit is deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from .base import ClassifierModel, softmax


def _unpack(theta, d, h, c):
    i = 0
    w1 = theta[i : i + d * h].reshape(d, h); i += d * h
    b1 = theta[i : i + h]; i += h
    w2 = theta[i : i + h * c].reshape(h, c); i += h * c
    b2 = theta[i : i + c]
    return w1, b1, w2, b2


def _loss_and_grad(theta, X, onehot, d, h, c):
    w1, b1, w2, b2 = _unpack(theta, d, h, c)
    n = X.shape[0]
    hidden = np.tanh(X @ w1 + b1)
    proba = softmax(hidden @ w2 + b2)
    # cross-entropy; clip keeps log finite on confident fits
    loss = -np.mean(np.sum(onehot * np.log(np.clip(proba, 1e-12, None)), axis=1))
    delta_out = (proba - onehot) / n
    grad_w2 = hidden.T @ delta_out
    grad_b2 = delta_out.sum(axis=0)
    delta_hidden = (delta_out @ w2.T) * (1.0 - hidden**2)
    grad_w1 = X.T @ delta_hidden
    grad_b1 = delta_hidden.sum(axis=0)
    grad = np.concatenate(
        [grad_w1.ravel(), grad_b1, grad_w2.ravel(), grad_b2]
    )
    return loss, grad


class NeuralNetModel(ClassifierModel):
    family = "nn"

    def __init__(self, weights, hyperparameters, class_count, feature_count, fingerprint):
        super().__init__(hyperparameters, class_count, feature_count, fingerprint)
        self._w1, self._b1, self._w2, self._b2 = weights

    @classmethod
    def fit(cls, X, y, hyperparameters, class_count, seed, fingerprint):
        d = X.shape[1]
        h = int(hyperparameters["hidden_units"])
        tol = float(hyperparameters["tolerance"])
        cap = int(hyperparameters["max_iterations"])
        rng = np.random.default_rng(seed)
        theta0 = np.concatenate(
            [
                rng.normal(0.0, 1.0 / np.sqrt(d), size=d * h),
                np.zeros(h),
                rng.normal(0.0, 1.0 / np.sqrt(h), size=h * class_count),
                np.zeros(class_count),
            ]
        )
        onehot = np.zeros((X.shape[0], class_count))
        onehot[np.arange(X.shape[0]), y] = 1.0
        result = minimize(
            _loss_and_grad,
            theta0,
            args=(X, onehot, d, h, class_count),
            method="L-BFGS-B",
            jac=True,
            options={"maxiter": cap, "ftol": tol, "gtol": 1e-12},
        )
        weights = _unpack(result.x, d, h, class_count)
        return cls(weights, hyperparameters, class_count, d, fingerprint)

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        hidden = np.tanh(X @ self._w1 + self._b1)
        return softmax(hidden @ self._w2 + self._b2)

    def _state_arrays(self):
        return {"w1": self._w1, "b1": self._b1, "w2": self._w2, "b2": self._b2}

    @classmethod
    def _from_state(cls, meta, arrays):
        return cls(
            (arrays["w1"], arrays["b1"], arrays["w2"], arrays["b2"]),
            meta["hyperparameters"],
            meta["class_count"],
            meta["feature_count"],
            meta["fingerprint"],
        )
