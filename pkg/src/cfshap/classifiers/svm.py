"""One-vs-rest linear SVM trained by deterministic sub-gradient descent.

Each class gets a hinge-loss binary problem with L2 regularization on
the weights (bias unregularized). Full-batch sub-gradient steps with a
1/(1 + t/tau) schedule and iterate averaging over the final half make
the fit deterministic without any RNG. Probabilities are a softmax over
the C margin scores.
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierModel, softmax


def _fit_binary(X, target, lam, iterations, eta0, tau):
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    w_avg = np.zeros(d)
    b_avg = 0.0
    avg_from = iterations // 2
    for t in range(iterations):
        margins = target * (X @ w + b)
        violating = margins < 1.0
        grad_w = 2.0 * lam * w - (target[violating, None] * X[violating]).sum(axis=0) / n
        grad_b = -target[violating].sum() / n
        eta = eta0 / (1.0 + t / tau)
        w -= eta * grad_w
        b -= eta * grad_b
        if t >= avg_from:
            w_avg += w
            b_avg += b
    k = iterations - avg_from
    return w_avg / k, b_avg / k


class LinearSvmModel(ClassifierModel):
    family = "svm"

    def __init__(self, W, b, hyperparameters, class_count, fingerprint):
        super().__init__(hyperparameters, class_count, W.shape[1], fingerprint)
        self._W = W  # (C, d)
        self._b = b  # (C,)

    @classmethod
    def fit(cls, X, y, hyperparameters, class_count, seed, fingerprint):
        lam = float(hyperparameters["l2"])
        iterations = int(hyperparameters["iterations"])
        eta0 = float(hyperparameters["learning_rate"])
        tau = float(hyperparameters["decay_steps"])
        W = np.zeros((class_count, X.shape[1]))
        b = np.zeros(class_count)
        for c in range(class_count):
            target = np.where(y == c, 1.0, -1.0)
            W[c], b[c] = _fit_binary(X, target, lam, iterations, eta0, tau)
        return cls(W, b, hyperparameters, class_count, fingerprint)

    def decision_scores(self, x: np.ndarray) -> np.ndarray:
        from .base import check_input

        X, single = check_input(x, self.feature_count)
        scores = X @ self._W.T + self._b
        return scores[0] if single else scores

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        return softmax(X @ self._W.T + self._b)

    def _state_arrays(self):
        return {"W": self._W, "b": self._b}

    @classmethod
    def _from_state(cls, meta, arrays):
        return cls(
            arrays["W"],
            arrays["b"],
            meta["hyperparameters"],
            meta["class_count"],
            meta["fingerprint"],
        )
