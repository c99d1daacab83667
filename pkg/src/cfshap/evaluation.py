"""End-to-end evaluation: counterfactual counts per dataset/model pair.

For every evaluation point and every desired class other than the
prediction, the pipeline computes per-class attributions once per
point, runs the counterfactual search per query, and aggregates:

* CFs   total counterfactual points (deduplicated per query)
* CPs   counterfactual points that coincide with a dataset row
* Ratio CPs / CFs as a percentage
* Avg   CFs per query

Reports render to markdown or CSV with a fixed column order and are
byte-reproducible under an identical configuration fingerprint.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .classifiers import DEFAULT_HYPERPARAMETERS, fit
from .contrastive import ContrastiveQuery
from .counterfactual import NeighborIndex, find_counterfactuals
from .data import Dataset, split, standardize
from .errors import NoCounterfactualError
from .shapley import (
    EXACT_DIMENSION_CAP,
    ShapleyConfig,
    ValueFunctionSpec,
    attribute,
    select_background,
)

__all__ = [
    "EvalConfig",
    "EvaluationReport",
    "enumerate_queries",
    "count_common",
    "run_evaluation",
    "emit_report",
]

COMMON_POINT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class EvalConfig:
    """Everything that determines an evaluation run."""

    seed: int = 42
    ratio: float = 0.8
    stratified: bool = True
    shap_mode: str = "auto"  # "auto" | "exact" | "sampled"
    n_permutations: int = 2000
    background_size: int = 100
    background_per_permutation: int | None = 4
    evaluate_on: str = "test"  # "test" | "all"
    max_eval_points: int | None = None
    hyperparameters: dict = field(default_factory=dict)

    def shapley_config(self) -> ShapleyConfig:
        return ShapleyConfig(
            mode=self.shap_mode,
            n_permutations=self.n_permutations,
            seed=self.seed,
            background_size=self.background_size,
            background_per_permutation=self.background_per_permutation,
        )

    def fingerprint(self, dataset_name: str, family: str) -> str:
        payload = {
            "config": asdict(self),
            "dataset": dataset_name,
            "family": family,
            "defaults": DEFAULT_HYPERPARAMETERS[family],
            "exact_dimension_cap": EXACT_DIMENSION_CAP,
            "dedup": "per-query, raw count kept as footnote",
            "avg_denominator": "queries",
        }
        return hashlib.sha256(
            json.dumps(payload, sort_keys=True, default=str).encode()
        ).hexdigest()


@dataclass(frozen=True)
class EvaluationReport:
    """Aggregated counterfactual metrics for one dataset/model pair."""

    dataset: str
    model: str
    total_queries: int
    cfs: int
    cps: int
    ratio: float  # percentage
    avg: float
    fallback_count: int
    config_fingerprint: str
    cfs_raw: int = 0  # pre-deduplication keeper total

    def __post_init__(self):
        if not 0 <= self.cps <= self.cfs:
            raise ValueError("need 0 <= cps <= cfs")
        expected_ratio = 100.0 * self.cps / max(self.cfs, 1)
        if abs(self.ratio - expected_ratio) > 1e-9:
            raise ValueError("ratio inconsistent with cps/cfs")
        if self.total_queries:
            if abs(self.avg - self.cfs / self.total_queries) > 1e-9:
                raise ValueError("avg inconsistent with cfs/total_queries")


def enumerate_queries(ds: Dataset, eval_indices: np.ndarray, model) -> list[ContrastiveQuery]:
    """One query per evaluation point per desired class != prediction."""
    points = ds.points[eval_indices]
    predictions = model.predict(points)
    queries = []
    for row, predicted in zip(points, predictions):
        for desired in range(ds.n_classes):
            if desired != predicted:
                queries.append(
                    ContrastiveQuery(
                        point=row, predicted=int(predicted), desired=desired
                    )
                )
    return queries


def count_common(points: np.ndarray, ds: Dataset) -> int:
    """How many of the points coincide with a dataset row.

    Comparison is per-coordinate within 1e-9 in the dataset's stored
    (standardized) units.
    """
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return 0
    points = points.reshape(-1, ds.n_features)
    count = 0
    for p in points:
        if np.any(np.all(np.abs(ds.points - p) <= COMMON_POINT_TOLERANCE, axis=1)):
            count += 1
    return count


def _evaluation_indices(ds: Dataset, the_split, config: EvalConfig) -> np.ndarray:
    if config.evaluate_on == "all":
        idx = np.arange(ds.n_points)
    else:
        idx = np.array(the_split.test_indices)
    if config.max_eval_points is not None and idx.size > config.max_eval_points:
        rng = np.random.default_rng(config.seed)
        idx = np.sort(rng.choice(idx, size=config.max_eval_points, replace=False))
    return idx


def run_evaluation(ds: Dataset, family: str, config: EvalConfig) -> EvaluationReport:
    """Train, explain and search counterfactuals for every query."""
    the_split = split(ds, config.ratio, config.seed, config.stratified)
    std = standardize(ds, the_split)
    X_train = std.points[the_split.train_indices]
    y_train = std.labels[the_split.train_indices]
    model = fit(
        family,
        X_train,
        y_train,
        hyperparameters=config.hyperparameters.get(family),
        seed=config.seed,
        n_classes=ds.n_classes,
    )
    background = select_background(
        X_train, y_train, size=config.background_size, seed=config.seed
    )
    spec = ValueFunctionSpec(model=model, background=background)
    shapley_config = config.shapley_config()
    index = NeighborIndex(X_train)
    eval_indices = _evaluation_indices(std, the_split, config)

    total_queries = 0
    cfs = 0
    cfs_raw = 0
    cps = 0
    fallback_count = 0
    for row_idx in eval_indices:
        point = std.points[row_idx]
        predicted = model.predict(point)
        sv = None
        for desired in range(std.n_classes):
            if desired == predicted:
                continue
            total_queries += 1
            try:
                if sv is None:  # one attribution serves every query on this point
                    sv = attribute(spec, point, shapley_config)
                result = find_counterfactuals(model, point, desired, sv, index)
            except NoCounterfactualError:
                fallback_count += 1
                continue
            except Exception as exc:
                raise RuntimeError(
                    f"pipeline failure on query (dataset={ds.name!r}, "
                    f"model={family!r}, row={int(row_idx)}, predicted={int(predicted)}, "
                    f"desired={desired}): {exc}"
                ) from exc
            if result.is_fallback:
                fallback_count += 1
                continue
            cfs += result.points.shape[0]
            cfs_raw += result.raw_candidate_count
            cps += count_common(result.points, std)

    ratio = 100.0 * cps / max(cfs, 1)
    avg = cfs / total_queries if total_queries else 0.0
    return EvaluationReport(
        dataset=ds.name,
        model=family,
        total_queries=total_queries,
        cfs=cfs,
        cps=cps,
        ratio=ratio,
        avg=avg,
        fallback_count=fallback_count,
        config_fingerprint=config.fingerprint(ds.name, family),
        cfs_raw=cfs_raw,
    )


_HEADER_NOTE = (
    "CFs are deduplicated per query (raw keeper totals in the last column); "
    "Avg divides CFs by the number of queries; fallback points are excluded "
    "from CFs and CPs."
)


def emit_report(reports: list[EvaluationReport], format: str = "markdown") -> str:
    """Render reports with the fixed column order Model | CFs | CPs | Ratio | Avg."""
    if format == "markdown":
        lines = [f"<!-- {_HEADER_NOTE} -->"]
        for fp in _fingerprint_lines(reports):
            lines.append(f"<!-- {fp} -->")
        current_dataset = None
        for r in reports:
            if r.dataset != current_dataset:
                current_dataset = r.dataset
                lines.append(f"\n## {r.dataset}\n")
                lines.append(
                    "| Model | CFs | CPs | Ratio | Avg | Queries | Fallbacks | Raw CFs |"
                )
                lines.append("|---|---|---|---|---|---|---|---|")
            lines.append(
                f"| {r.model} | {r.cfs} | {r.cps} | {r.ratio:.2f}% "
                f"| {r.avg:.2f} | {r.total_queries} | {r.fallback_count} | {r.cfs_raw} |"
            )
        if not reports:
            lines.append(
                "| Model | CFs | CPs | Ratio | Avg | Queries | Fallbacks | Raw CFs |"
            )
            lines.append("|---|---|---|---|---|---|---|---|")
        return "\n".join(lines) + "\n"
    if format == "csv":
        lines = [f"# {_HEADER_NOTE}"]
        for fp in _fingerprint_lines(reports):
            lines.append(f"# {fp}")
        lines.append("dataset,model,cfs,cps,ratio,avg,queries,fallbacks,cfs_raw")
        for r in reports:
            lines.append(
                f"{r.dataset},{r.model},{r.cfs},{r.cps},{r.ratio:.2f},"
                f"{r.avg:.2f},{r.total_queries},{r.fallback_count},{r.cfs_raw}"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def _fingerprint_lines(reports: list[EvaluationReport]) -> list[str]:
    seen = []
    for r in reports:
        line = f"config {r.dataset}/{r.model}: {r.config_fingerprint}"
        if line not in seen:
            seen.append(line)
    return seen
