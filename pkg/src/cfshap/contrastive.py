"""Contrastive "Why P not Q?" explanations from Shapley attributions.

The answer splits into two halves: features with positive attribution
toward the predicted class P (why P) and features with negative
attribution toward the desired class Q (why not Q). Zero attributions
belong to neither half. Each half renders to one fixed-template
sentence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classifiers import ClassifierModel
from .errors import NotContrastiveError
from .shapley import ShapleyConfig, ShapleyMatrix, ValueFunctionSpec, attribute

__all__ = [
    "ContrastiveQuery",
    "ContrastiveExplanation",
    "identify_pq",
    "build_contrastive",
    "render_nl",
]


@dataclass(frozen=True)
class ContrastiveQuery:
    """One "Why P not Q?" question about a classified point.

    ``point`` is in the model's (standardized) input space; ``point_raw``
    carries source units for display when known.
    """

    point: np.ndarray
    predicted: int
    desired: int
    point_raw: np.ndarray | None = None

    def __post_init__(self):
        if self.desired == self.predicted:
            raise NotContrastiveError(
                f"query is not contrastive: desired class equals prediction "
                f"({self.predicted})"
            )


@dataclass(frozen=True)
class ContrastiveExplanation:
    """Structured and rendered answer to a contrastive query."""

    why_p: tuple[tuple[str, float], ...]  # phi > 0 for P, descending
    not_q: tuple[tuple[str, float], ...]  # phi < 0 for Q, ascending
    nl_why_p: str
    nl_not_q: str
    shapley: ShapleyMatrix


def identify_pq(
    model: ClassifierModel,
    point: np.ndarray,
    desired: int,
    shapley_config: ShapleyConfig,
    background: np.ndarray,
) -> tuple[int, int, ShapleyMatrix]:
    """Find the predicted class P, check Q, and attribute the point."""
    if not 0 <= desired < model.class_count:
        raise ValueError(
            f"desired class {desired} outside 0..{model.class_count - 1}"
        )
    predicted = model.predict(point)
    if desired == predicted:
        raise NotContrastiveError(
            f"query is not contrastive: desired class equals prediction ({predicted})"
        )
    spec = ValueFunctionSpec(model=model, background=background)
    sv = attribute(spec, point, shapley_config)
    return predicted, desired, sv


def build_contrastive(
    sv: ShapleyMatrix, p: int, q: int, feature_names: Sequence[str]
) -> ContrastiveExplanation:
    """Split attributions by sign into the two answer halves."""
    if p == q:
        raise NotContrastiveError("P and Q must differ")
    names = list(feature_names)
    if len(names) != sv.phi.shape[1]:
        raise ValueError(
            f"{len(names)} feature names for {sv.phi.shape[1]} attribution columns"
        )
    row_p = sv.phi[p]
    row_q = sv.phi[q]
    pos = [(names[j], float(row_p[j])) for j in range(len(names)) if row_p[j] > 0.0]
    neg = [(names[j], float(row_q[j])) for j in range(len(names)) if row_q[j] < 0.0]
    # stable sorts keep the lower feature index first on equal values
    pos.sort(key=lambda item: -item[1])
    neg.sort(key=lambda item: item[1])
    why_p = tuple(pos)
    not_q = tuple(neg)
    return ContrastiveExplanation(
        why_p=why_p,
        not_q=not_q,
        nl_why_p=render_nl(why_p, "pro"),
        nl_not_q=render_nl(not_q, "anti"),
        shapley=sv,
    )


def render_nl(features: Sequence[tuple[str, float]], polarity: str) -> str:
    """Fixed-template sentence for one answer half.

    polarity "pro" covers the predicted class, "anti" the desired one.
    """
    if polarity not in ("pro", "anti"):
        raise ValueError(f"polarity must be 'pro' or 'anti', got {polarity!r}")
    if not features:
        return f"No features {polarity} this classification were identified."
    label = "Pro" if polarity == "pro" else "Anti"
    head = features[0][0]
    text = f"Algorithms {label} classification was primarily influenced by {head}"
    if len(features) > 1:
        rest = ", ".join(name for name, _ in features[1:])
        text += f", also influenced by {rest}"
    return text
