"""k-nearest-neighbour classifier on standardized features.

Votes are uniform over the k nearest training points under Euclidean
distance. Membership of the k-set is decided by (distance, training
index) lexicographic order, so exact distance ties always favour the
lower training index.
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierModel


class KnnModel(ClassifierModel):
    family = "knn"

    def __init__(self, X, y, hyperparameters, class_count, fingerprint):
        super().__init__(hyperparameters, class_count, X.shape[1], fingerprint)
        self._X = np.array(X, dtype=float, order="C")
        self._y = np.array(y, dtype=np.int64, order="C")
        self._X.setflags(write=False)
        self._y.setflags(write=False)
        self._k = min(int(hyperparameters["k"]), self._X.shape[0])
        self._sq_norms = (self._X**2).sum(axis=1)
        onehot = np.zeros((self._X.shape[0], class_count))
        onehot[np.arange(self._X.shape[0]), self._y] = 1.0
        self._onehot = onehot

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        k = self._k
        n_train = self._X.shape[0]
        out = np.empty((X.shape[0], self.class_count))
        # chunked so the (rows x train) distance matrix stays bounded
        chunk = max(1, int(4_000_000 // max(n_train, 1)))
        for start in range(0, X.shape[0], chunk):
            Q = X[start : start + chunk]
            d2 = self._sq_norms[None, :] - 2.0 * (Q @ self._X.T)
            # query norms are constant per row, so omitting them keeps the ordering
            if k == n_train:
                members = np.ones_like(d2, dtype=bool)
            else:
                part = np.argpartition(d2, k - 1, axis=1)[:, :k]
                kth_val = np.take_along_axis(d2, part, axis=1).max(axis=1)
                closer = d2 < kth_val[:, None]
                n_closer = closer.sum(axis=1)
                at_kth = d2 == kth_val[:, None]
                # fill the remaining slots with the lowest-index ties
                rank_at = np.cumsum(at_kth, axis=1)
                members = closer | (at_kth & (rank_at <= (k - n_closer)[:, None]))
            out[start : start + chunk] = (members @ self._onehot) / k
        return out

    def _state_arrays(self):
        return {"X": self._X, "y": self._y}

    @classmethod
    def _from_state(cls, meta, arrays):
        return cls(
            arrays["X"],
            arrays["y"],
            meta["hyperparameters"],
            meta["class_count"],
            meta["fingerprint"],
        )
