"""Random forest of Gini decision trees with per-tree RNG streams.

Each tree bootstraps its training rows and considers a random sqrt(d)
feature subset at every split. Per-tree generators are spawned from one
seed sequence, so refitting with the same data and seed reproduces the
forest bit for bit. Trees are stored as flat arrays for vectorized
prediction; leaf outputs are class distributions and the forest
probability is their mean over trees.
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierModel


def _gini_best_split(
    X: np.ndarray, y: np.ndarray, rows: np.ndarray, features: np.ndarray, n_classes: int
):
    """Best (cost, feature, threshold) over candidate midpoints, or None."""
    n = rows.size
    best = None
    y_node = y[rows]
    for f in features:
        col = X[rows, f]
        order = np.argsort(col, kind="stable")
        sorted_col = col[order]
        sorted_y = y_node[order]
        # candidate boundaries where the value actually changes
        change = np.flatnonzero(sorted_col[1:] > sorted_col[:-1])
        if change.size == 0:
            continue
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), sorted_y] = 1.0
        left_counts = np.cumsum(onehot, axis=0)[change]
        n_left = change + 1.0
        n_right = n - n_left
        right_counts = onehot.sum(axis=0)[None, :] - left_counts
        gini_left = 1.0 - ((left_counts / n_left[:, None]) ** 2).sum(axis=1)
        gini_right = 1.0 - ((right_counts / n_right[:, None]) ** 2).sum(axis=1)
        cost = (n_left * gini_left + n_right * gini_right) / n
        i = int(np.argmin(cost))
        if best is None or cost[i] < best[0]:
            thr = 0.5 * (sorted_col[change[i]] + sorted_col[change[i] + 1])
            best = (float(cost[i]), int(f), float(thr))
    return best


class _TreeBuilder:
    """Grows one tree into parallel node arrays."""

    def __init__(self, X, y, n_classes, max_depth, rng, n_sub_features):
        self.X, self.y = X, y
        self.n_classes = n_classes
        self.max_depth = max_depth
        self.rng = rng
        self.n_sub = n_sub_features
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.proba: list[np.ndarray] = []

    def build(self, rows: np.ndarray, depth: int) -> int:
        node = len(self.feature)
        counts = np.bincount(self.y[rows], minlength=self.n_classes).astype(float)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.proba.append(counts / counts.sum())
        if depth >= self.max_depth or rows.size < 2 or np.count_nonzero(counts) == 1:
            return node
        subset = np.sort(self.rng.choice(self.X.shape[1], size=self.n_sub, replace=False))
        found = _gini_best_split(self.X, self.y, rows, subset, self.n_classes)
        if found is None:
            return node
        _, f, thr = found
        mask = self.X[rows, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self.build(rows[mask], depth + 1)
        self.right[node] = self.build(rows[~mask], depth + 1)
        return node


class RandomForestModel(ClassifierModel):
    family = "rf"

    def __init__(self, trees, hyperparameters, class_count, feature_count, fingerprint):
        super().__init__(hyperparameters, class_count, feature_count, fingerprint)
        # trees: list of (feature, threshold, left, right, proba) arrays
        self._trees = trees

    @classmethod
    def fit(cls, X, y, hyperparameters, class_count, seed, fingerprint):
        n_trees = int(hyperparameters["n_trees"])
        max_depth = int(hyperparameters["max_depth"])
        d = X.shape[1]
        n_sub = max(1, int(round(np.sqrt(d))))
        streams = np.random.SeedSequence(seed).spawn(n_trees)
        trees = []
        for ss in streams:
            rng = np.random.default_rng(ss)
            rows = rng.integers(0, X.shape[0], size=X.shape[0])
            builder = _TreeBuilder(X, y, class_count, max_depth, rng, n_sub)
            builder.build(rows, 0)
            trees.append(
                (
                    np.asarray(builder.feature, dtype=np.int64),
                    np.asarray(builder.threshold, dtype=float),
                    np.asarray(builder.left, dtype=np.int64),
                    np.asarray(builder.right, dtype=np.int64),
                    np.asarray(builder.proba, dtype=float),
                )
            )
        return cls(trees, hyperparameters, class_count, d, fingerprint)

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        acc = np.zeros((X.shape[0], self.class_count))
        for feature, threshold, left, right, proba in self._trees:
            node = np.zeros(X.shape[0], dtype=np.int64)
            active = feature[node] >= 0
            while np.any(active):
                idx = node[active]
                go_left = X[active, feature[idx]] <= threshold[idx]
                node[active] = np.where(go_left, left[idx], right[idx])
                active = feature[node] >= 0
            acc += proba[node]
        return acc / len(self._trees)

    def _state_arrays(self):
        arrays = {"n_trees_stored": np.array([len(self._trees)])}
        for i, (f, t, l, r, p) in enumerate(self._trees):
            arrays[f"t{i}_feature"] = f
            arrays[f"t{i}_threshold"] = t
            arrays[f"t{i}_left"] = l
            arrays[f"t{i}_right"] = r
            arrays[f"t{i}_proba"] = p
        return arrays

    @classmethod
    def _from_state(cls, meta, arrays):
        n = int(arrays["n_trees_stored"][0])
        trees = [
            (
                arrays[f"t{i}_feature"],
                arrays[f"t{i}_threshold"],
                arrays[f"t{i}_left"],
                arrays[f"t{i}_right"],
                arrays[f"t{i}_proba"],
            )
            for i in range(n)
        ]
        return cls(
            trees,
            meta["hyperparameters"],
            meta["class_count"],
            meta["feature_count"],
            meta["fingerprint"],
        )
