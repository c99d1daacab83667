"""Counterfactual datapoint search over expanding neighbor sets.

The mutate mask marks the features with negative attribution toward the
desired class Q; only those coordinates may change. Neighbor budgets
grow in steps of 50 until a batch yields at least one mutant the model
classifies as Q. When no budget succeeds (or nothing is mutable) the
nearest training point the model assigns to Q is returned instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import ClassifierModel
from .contrastive import ContrastiveQuery
from .errors import NoCounterfactualError
from .shapley import ShapleyMatrix

__all__ = [
    "BATCH_STEP",
    "NeighborIndex",
    "CounterfactualSet",
    "nearest_neighbors",
    "mutate",
    "find_counterfactuals",
    "fallback_nearest_desired",
]

BATCH_STEP = 50


class NeighborIndex:
    """Euclidean nearest-neighbor lookup over the (standardized) training
    matrix, with ascending-distance, then ascending-training-index order."""

    def __init__(self, points: np.ndarray) -> None:
        pts = np.array(points, dtype=float, order="C")
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("neighbor index needs a non-empty point matrix")
        pts.setflags(write=False)
        self.points = pts

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def ordered_indices(self, dp: np.ndarray) -> np.ndarray:
        """All training indices sorted by (distance to dp, index)."""
        dp = np.asarray(dp, dtype=float)
        if dp.shape != (self.points.shape[1],):
            raise ValueError(
                f"query must have shape ({self.points.shape[1]},), got {dp.shape}"
            )
        d2 = ((self.points - dp) ** 2).sum(axis=1)
        return np.argsort(d2, kind="stable")


def nearest_neighbors(index: NeighborIndex, dp: np.ndarray, n: int) -> np.ndarray:
    """The min(n, train size) nearest training points, closest first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    order = index.ordered_indices(dp)[: min(n, index.size)]
    return index.points[order]


def mutate(dp: np.ndarray, neighbor: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Copy the neighbor's values where the mask is true, keep dp elsewhere."""
    dp = np.asarray(dp, dtype=float)
    neighbor = np.asarray(neighbor, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if dp.shape != neighbor.shape or dp.shape != mask.shape:
        raise ValueError(
            f"length mismatch: dp {dp.shape}, neighbor {neighbor.shape}, mask {mask.shape}"
        )
    return np.where(mask, neighbor, dp)


@dataclass(frozen=True)
class CounterfactualSet:
    """Result of one counterfactual search.

    ``points`` hold deduplicated mutants classified as the desired class,
    in neighbor order; coordinates outside ``mutate_mask`` are bit-equal
    to the query point. ``raw_candidate_count`` is the keeper count
    before deduplication (reported alongside the deduplicated total).
    """

    query: ContrastiveQuery
    mutate_mask: np.ndarray
    points: np.ndarray  # (k, d); k may be 0
    neighbor_budget_used: int
    is_fallback: bool
    fallback_point: np.ndarray | None = None
    raw_candidate_count: int = 0

    def __post_init__(self):
        mask = np.array(self.mutate_mask, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "mutate_mask", mask)
        pts = np.array(self.points, dtype=float)
        pts = pts.reshape(-1, mask.size)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.is_fallback and (self.points.shape[0] > 0 or self.fallback_point is None):
            raise ValueError("fallback sets carry exactly one fallback point and no mutants")


def fallback_nearest_desired(
    index: NeighborIndex,
    dp: np.ndarray,
    q: int,
    model: ClassifierModel,
) -> np.ndarray | None:
    """Nearest training point the model assigns to class q, or None."""
    predictions = model.predict(index.points)
    order = index.ordered_indices(dp)
    hits = order[predictions[order] == q]
    if hits.size == 0:
        return None
    return index.points[hits[0]].copy()


def find_counterfactuals(
    model: ClassifierModel,
    dp: np.ndarray,
    q: int,
    sv: ShapleyMatrix,
    index: NeighborIndex,
) -> CounterfactualSet:
    """Run the expanding-budget mutation search for "make it class q".

    Raises NoCounterfactualError when neither mutation nor the fallback
    can produce a class-q point.
    """
    dp = np.asarray(dp, dtype=float)
    predicted = model.predict(dp)
    if q == predicted:
        raise ValueError(f"desired class must differ from the prediction ({predicted})")
    query = ContrastiveQuery(point=dp, predicted=predicted, desired=q)
    mask = sv.phi[q] < 0.0

    def fallback_set(budget: int) -> CounterfactualSet:
        candidate = fallback_nearest_desired(index, dp, q, model)
        if candidate is None:
            raise NoCounterfactualError(
                f"no mutant reaches class {q} and no training point is "
                f"predicted as class {q}"
            )
        return CounterfactualSet(
            query=query,
            mutate_mask=mask,
            points=np.empty((0, dp.size)),
            neighbor_budget_used=budget,
            is_fallback=True,
            fallback_point=candidate,
        )

    if not mask.any():
        return fallback_set(0)

    order = index.ordered_indices(dp)
    i = 0
    while True:
        i += 1
        budget = BATCH_STEP * i
        neighbors = index.points[order[: min(budget, index.size)]]
        mutants = np.where(mask[None, :], neighbors, dp[None, :])
        keep = model.predict(mutants) == q
        # the unmutated original is never a counterfactual
        keep &= np.any(mutants != dp[None, :], axis=1)
        keepers = mutants[keep]
        if keepers.shape[0] > 0:
            _, first = np.unique(keepers, axis=0, return_index=True)
            unique = keepers[np.sort(first)]
            return CounterfactualSet(
                query=query,
                mutate_mask=mask,
                points=unique,
                neighbor_budget_used=budget,
                is_fallback=False,
                raw_candidate_count=int(keep.sum()),
            )
        if budget >= index.size:
            return fallback_set(budget)
