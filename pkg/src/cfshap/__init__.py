"""Contrastive and counterfactual explanations for tabular classifiers.

The pipeline: load a dataset, train one of four black-box classifier
families, attribute a prediction to features with per-class Shapley
values, answer "Why P not Q?" in natural language, and search for
counterfactual datapoints that flip the prediction to Q by mutating
only the features working against Q.
"""

from .classifiers import DEFAULT_HYPERPARAMETERS, FAMILIES, ClassifierModel, fit, load_model, save_model
from .contrastive import (
    ContrastiveExplanation,
    ContrastiveQuery,
    build_contrastive,
    identify_pq,
    render_nl,
)
from .counterfactual import (
    CounterfactualSet,
    NeighborIndex,
    fallback_nearest_desired,
    find_counterfactuals,
    mutate,
    nearest_neighbors,
)
from .data import (
    Dataset,
    FeatureSpec,
    Split,
    Standardization,
    builtin_names,
    load_builtin,
    load_csv,
    split,
    standardize,
)
from .errors import (
    CfShapError,
    DatasetError,
    ModelFormatError,
    NoCounterfactualError,
    NotContrastiveError,
)
from .evaluation import (
    EvalConfig,
    EvaluationReport,
    count_common,
    emit_report,
    enumerate_queries,
    run_evaluation,
)
from .shapley import (
    EXACT_DIMENSION_CAP,
    AttributionMethod,
    ShapleyConfig,
    ShapleyMatrix,
    ValueFunctionSpec,
    attribute,
    select_background,
    shapley_exact,
    shapley_sampled,
    value,
)

__version__ = "0.1.0"
