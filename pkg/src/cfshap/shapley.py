"""Model-agnostic per-class Shapley attribution.

The value of a coalition is the model's mean class-probability vector
over a background sample with the coalition's features pinned to the
explained point (interventional marginalization). ``shapley_exact``
enumerates every coalition for low dimension; ``shapley_sampled``
estimates by permutation sampling and then restores the efficiency
identity exactly by redistributing the residual.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .classifiers import ClassifierModel

__all__ = [
    "EXACT_DIMENSION_CAP",
    "ValueFunctionSpec",
    "AttributionMethod",
    "ShapleyMatrix",
    "ShapleyConfig",
    "select_background",
    "value",
    "shapley_exact",
    "shapley_sampled",
    "attribute",
]

logger = logging.getLogger(__name__)

# 2^15 coalitions x background is the practical limit for enumeration
EXACT_DIMENSION_CAP = 15

_CHUNK_ROWS = 262_144


@dataclass(frozen=True)
class ValueFunctionSpec:
    """Model plus background sample defining the coalition value function.

    The explained output is the per-class probability vector, so base
    values and attributions stay on the probability simplex.
    """

    model: ClassifierModel
    background: np.ndarray

    def __post_init__(self):
        bg = np.array(self.background, dtype=float, order="C")
        if bg.ndim != 2 or bg.shape[0] < 1:
            raise ValueError("background must be a non-empty matrix")
        if bg.shape[1] != self.model.feature_count:
            raise ValueError(
                f"background has {bg.shape[1]} columns, model expects "
                f"{self.model.feature_count}"
            )
        bg.setflags(write=False)
        object.__setattr__(self, "background", bg)

    @property
    def base_values(self) -> np.ndarray:
        return self.model.predict_proba(self.background).mean(axis=0)


@dataclass(frozen=True)
class AttributionMethod:
    kind: str  # "exact" or "sampled"
    n_permutations: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class ShapleyMatrix:
    """Per-class x per-feature attributions for one explained point.

    For every class c, ``base_values[c] + phi[c].sum()`` equals the
    model's probability for c at ``point``.
    """

    phi: np.ndarray  # (C, d)
    base_values: np.ndarray  # (C,)
    method: AttributionMethod
    point: np.ndarray  # (d,)

    def __post_init__(self):
        for name in ("phi", "base_values", "point"):
            arr = np.array(getattr(self, name), dtype=float, order="C")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not np.all(np.isfinite(self.phi)):
            raise ValueError("non-finite attribution value")


@dataclass(frozen=True)
class ShapleyConfig:
    """How to run the engine for one dataset/model pairing.

    mode "auto" enumerates exactly up to EXACT_DIMENSION_CAP features
    and falls back to permutation sampling above it.
    """

    mode: str = "auto"  # "auto" | "exact" | "sampled"
    n_permutations: int = 2000
    seed: int = 0
    background_size: int = 100
    background_per_permutation: int | None = None

    def resolve_mode(self, d: int) -> str:
        if self.mode == "auto":
            return "exact" if d <= EXACT_DIMENSION_CAP else "sampled"
        return self.mode


def select_background(
    X: np.ndarray, y: np.ndarray, size: int = 100, seed: int = 0
) -> np.ndarray:
    """Deterministic stratified subsample of training rows.

    Rows are allocated to classes proportionally (every class keeps at
    least one row) and drawn without replacement under the seed. If
    ``size`` covers the whole training set the full matrix is returned.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    if size >= n:
        return X.copy()
    rng = np.random.default_rng(seed)
    classes = np.unique(y)
    quota = {c: max(1, int(round(size * np.sum(y == c) / n))) for c in classes}
    # trim overshoot from the largest quotas so totals match exactly
    while sum(quota.values()) > size:
        largest = max(quota, key=lambda c: (quota[c], c))
        quota[largest] -= 1
    while sum(quota.values()) < size:
        smallest = min(quota, key=lambda c: (quota[c], c))
        quota[smallest] += 1
    chosen = []
    for c in classes:
        members = np.flatnonzero(y == c)
        take = min(quota[c], members.size)
        chosen.append(rng.choice(members, size=take, replace=False))
    idx = np.sort(np.concatenate(chosen))
    return X[idx].copy()


def value(
    spec: ValueFunctionSpec, point: np.ndarray, coalition: Iterable[int]
) -> np.ndarray:
    """Mean class probabilities with coalition features pinned to the point."""
    point = np.asarray(point, dtype=float)
    d = spec.model.feature_count
    if point.shape != (d,):
        raise ValueError(f"point must have shape ({d},), got {point.shape}")
    members = sorted(set(int(j) for j in coalition))
    if members and (members[0] < 0 or members[-1] >= d):
        raise ValueError(f"coalition indices out of range 0..{d - 1}: {members}")
    Z = spec.background.copy()
    Z[:, members] = point[members]
    return spec.model.predict_proba(Z).mean(axis=0)


def _coalition_values(spec: ValueFunctionSpec, point: np.ndarray) -> np.ndarray:
    """Value vectors for all 2^d coalitions, indexed by bitmask."""
    d = spec.model.feature_count
    bg = spec.background
    B = bg.shape[0]
    n_masks = 1 << d
    bits = (np.arange(n_masks)[:, None] >> np.arange(d)[None, :]) & 1  # (2^d, d)
    V = np.empty((n_masks, spec.model.class_count))
    masks_per_chunk = max(1, _CHUNK_ROWS // B)
    for start in range(0, n_masks, masks_per_chunk):
        stop = min(start + masks_per_chunk, n_masks)
        block_bits = bits[start:stop].astype(bool)
        Z = np.where(block_bits[:, None, :], point[None, None, :], bg[None, :, :])
        proba = spec.model.predict_proba(Z.reshape(-1, d))
        V[start:stop] = proba.reshape(stop - start, B, -1).mean(axis=1)
    return V


def shapley_exact(spec: ValueFunctionSpec, point: np.ndarray) -> ShapleyMatrix:
    """Classical Shapley values by full coalition enumeration (d <= cap)."""
    point = np.asarray(point, dtype=float)
    d = spec.model.feature_count
    if point.shape != (d,):
        raise ValueError(f"point must have shape ({d},), got {point.shape}")
    if not np.all(np.isfinite(point)):
        raise ValueError("non-finite value in explained point")
    if d > EXACT_DIMENSION_CAP:
        raise ValueError(
            f"exact enumeration capped at d={EXACT_DIMENSION_CAP}; "
            f"use shapley_sampled for d={d}"
        )
    V = _coalition_values(spec, point)
    C = spec.model.class_count
    popcount = np.zeros(1 << d, dtype=np.int64)
    for j in range(d):
        popcount += (np.arange(1 << d) >> j) & 1
    fact = [math.factorial(k) for k in range(d + 1)]
    weight_by_size = np.array(
        [fact[s] * fact[d - s - 1] / fact[d] for s in range(d)], dtype=float
    )
    phi = np.zeros((C, d))
    all_masks = np.arange(1 << d)
    for j in range(d):
        bit = 1 << j
        without = all_masks[(all_masks & bit) == 0]
        w = weight_by_size[popcount[without]]
        delta = V[without + bit] - V[without]  # (m, C)
        phi[:, j] = (w[:, None] * delta).sum(axis=0)
    return ShapleyMatrix(
        phi=phi,
        base_values=V[0],
        method=AttributionMethod(kind="exact"),
        point=point,
    )


def shapley_sampled(
    spec: ValueFunctionSpec,
    point: np.ndarray,
    n_permutations: int,
    seed: int,
    background_per_permutation: int | None = None,
) -> ShapleyMatrix:
    """Permutation-sampling Shapley estimate, deterministic under seed.

    Each permutation is walked front to back, crediting every feature
    with the probability change caused by pinning it, marginalized over
    the background (or a per-permutation background draw when
    ``background_per_permutation`` bounds the cost). The efficiency
    residual is then redistributed proportionally to |phi| so the
    identity holds exactly.
    """
    point = np.asarray(point, dtype=float)
    d = spec.model.feature_count
    C = spec.model.class_count
    if point.shape != (d,):
        raise ValueError(f"point must have shape ({d},), got {point.shape}")
    if not np.all(np.isfinite(point)):
        raise ValueError("non-finite value in explained point")
    if n_permutations < 1:
        raise ValueError("n_permutations must be >= 1")
    bg = spec.background
    B = bg.shape[0]
    rng = np.random.default_rng(seed)
    perms = np.argsort(rng.random((n_permutations, d)), axis=1)
    if background_per_permutation is not None and background_per_permutation < B:
        rows_per = int(background_per_permutation)
        bg_draw = rng.integers(0, B, size=(n_permutations, rows_per))
    else:
        rows_per = B
        bg_draw = None

    phi_acc = np.zeros((d, C))
    chunk = max(1, _CHUNK_ROWS // max(rows_per * d, 1))
    for start in range(0, n_permutations, chunk):
        stop = min(start + chunk, n_permutations)
        m = stop - start
        if bg_draw is None:
            Z = np.repeat(bg[None, :, :], m, axis=0).reshape(m * B, d)
        else:
            Z = bg[bg_draw[start:stop].reshape(-1)].copy()
        block = Z.reshape(m, rows_per, d)
        prev = (
            spec.model.predict_proba(Z).reshape(m, rows_per, C).mean(axis=1)
        )
        for t in range(d):
            cols = perms[start:stop, t]
            block[np.arange(m), :, cols] = point[cols][:, None]
            cur = (
                spec.model.predict_proba(block.reshape(-1, d))
                .reshape(m, rows_per, C)
                .mean(axis=1)
            )
            np.add.at(phi_acc, cols, cur - prev)
            prev = cur
    phi = (phi_acc / n_permutations).T  # (C, d)

    base = spec.base_values
    target = spec.model.predict_proba(point)
    residual = target - base - phi.sum(axis=1)
    max_residual = float(np.abs(residual).max())
    if max_residual > 0.05:
        logger.info(
            "sampled-mode efficiency residual %.4f redistributed "
            "(n_permutations=%d may be low)",
            max_residual,
            n_permutations,
        )
    else:
        logger.debug("sampled-mode efficiency residual %.2e redistributed", max_residual)
    magnitude = np.abs(phi)
    totals = magnitude.sum(axis=1)
    phi = phi + np.where(
        (totals == 0.0)[:, None],
        residual[:, None] / d,
        magnitude * (residual / np.where(totals == 0.0, 1.0, totals))[:, None],
    )
    return ShapleyMatrix(
        phi=phi,
        base_values=base,
        method=AttributionMethod(kind="sampled", n_permutations=n_permutations, seed=seed),
        point=point,
    )


def attribute(
    spec: ValueFunctionSpec, point: np.ndarray, config: ShapleyConfig
) -> ShapleyMatrix:
    """Run exact or sampled attribution per the config's mode policy."""
    mode = config.resolve_mode(spec.model.feature_count)
    if mode == "exact":
        return shapley_exact(spec, point)
    return shapley_sampled(
        spec,
        point,
        n_permutations=config.n_permutations,
        seed=config.seed,
        background_per_permutation=config.background_per_permutation,
    )
