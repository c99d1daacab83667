"""Command-line front end: evaluate, explain, serve.

Exit codes: 0 success, 1 usage error, 2 pipeline failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .classifiers import FAMILIES, fit
from .contrastive import build_contrastive, identify_pq
from .counterfactual import NeighborIndex, find_counterfactuals
from .data import Dataset, builtin_names, load_builtin, load_csv, split, standardize
from .errors import CfShapError, NoCounterfactualError, NotContrastiveError
from .evaluation import EvalConfig, emit_report, run_evaluation
from .shapley import select_background

USAGE_ERROR = 1
PIPELINE_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we reserve that
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _resolve_dataset(spec_text: str, label_column: str | None) -> Dataset:
    if spec_text in builtin_names():
        return load_builtin(spec_text)
    path = Path(spec_text)
    if label_column is None:
        raise CfShapError(
            f"{spec_text!r} is not a bundled dataset; pass --label-column for CSV files"
        )
    return load_csv(path, label_column=label_column)


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, help="bundled name or CSV path")
    parser.add_argument("--label-column", default=None, help="label column for CSV input")
    parser.add_argument("--model", required=True, choices=FAMILIES)
    parser.add_argument("--seed", type=_nonnegative_int, default=42)
    parser.add_argument("--split", type=float, default=0.8, dest="ratio")
    parser.add_argument("--shap", choices=["auto", "exact", "sampled"], default="auto")
    parser.add_argument("--permutations", type=int, default=2000)
    parser.add_argument("--background", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfshap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="run the counterfactual metrics for one model")
    _add_common(p_eval)
    p_eval.add_argument("--max-points", type=int, default=None)
    p_eval.add_argument("--evaluate-on", choices=["test", "all"], default="test")
    p_eval.add_argument("--out", default=None, help="report path (.md or .csv); stdout otherwise")

    p_explain = sub.add_parser("explain", help="answer one Why-P-not-Q query")
    _add_common(p_explain)
    p_explain.add_argument("--point", required=True, help="comma-separated raw feature values")
    p_explain.add_argument("--desired", type=int, required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP explanation service")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def _config_from_args(args) -> EvalConfig:
    return EvalConfig(
        seed=args.seed,
        ratio=args.ratio,
        shap_mode=args.shap,
        n_permutations=args.permutations,
        background_size=args.background,
        max_eval_points=getattr(args, "max_points", None),
        evaluate_on=getattr(args, "evaluate_on", "test"),
    )


def _cmd_evaluate(args) -> int:
    ds = _resolve_dataset(args.dataset, args.label_column)
    report = run_evaluation(ds, args.model, _config_from_args(args))
    fmt = "csv" if (args.out or "").endswith(".csv") else "markdown"
    text = emit_report([report], format=fmt)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_explain(args) -> int:
    ds = _resolve_dataset(args.dataset, args.label_column)
    try:
        raw_point = np.array([float(v) for v in args.point.split(",")], dtype=float)
    except ValueError:
        print(f"cfshap: error: could not parse --point {args.point!r}", file=sys.stderr)
        return USAGE_ERROR
    if raw_point.size != ds.n_features:
        print(
            f"cfshap: error: --point has {raw_point.size} values, dataset has "
            f"{ds.n_features} features",
            file=sys.stderr,
        )
        return USAGE_ERROR
    if not 0 <= args.desired < ds.n_classes:
        print(
            f"cfshap: error: --desired must be in 0..{ds.n_classes - 1}", file=sys.stderr
        )
        return USAGE_ERROR

    config = _config_from_args(args)
    the_split = split(ds, config.ratio, config.seed, config.stratified)
    std = standardize(ds, the_split)
    X_train = std.points[the_split.train_indices]
    y_train = std.labels[the_split.train_indices]
    model = fit(args.model, X_train, y_train, seed=config.seed, n_classes=ds.n_classes)
    background = select_background(X_train, y_train, config.background_size, config.seed)
    point = std.to_standardized(raw_point)

    p, q, sv = identify_pq(model, point, args.desired, config.shapley_config(), background)
    explanation = build_contrastive(sv, p, q, ds.feature_names)
    print(f"Why {ds.class_names[p]} not {ds.class_names[q]}?")
    print(f"  {explanation.nl_why_p}")
    print(f"  {explanation.nl_not_q}")

    index = NeighborIndex(X_train)
    try:
        result = find_counterfactuals(model, point, q, sv, index)
    except NoCounterfactualError as exc:
        print(f"No counterfactual available: {exc}")
        return 0
    if result.is_fallback:
        fallback_raw = std.to_raw(result.fallback_point)
        print("No mutant reached the desired class; nearest desired-class point:")
        print("  " + ", ".join(f"{v:g}" for v in fallback_raw))
        return 0
    print(
        f"Counterfactual points (searched {result.neighbor_budget_used} neighbors, "
        f"mutated features: "
        + ", ".join(
            name for name, flag in zip(ds.feature_names, result.mutate_mask) if flag
        )
        + "):"
    )
    for row in result.points:
        print("  " + ", ".join(f"{v:g}" for v in std.to_raw(row)))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, resolve_port

    app = create_app()
    uvicorn.run(app, host=args.host, port=resolve_port(args.port))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "evaluate": _cmd_evaluate,
        "explain": _cmd_explain,
        "serve": _cmd_serve,
    }[args.command]
    try:
        return handler(args)
    except NotContrastiveError as exc:
        print(f"cfshap: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except CfShapError as exc:
        print(f"cfshap: error: {exc}", file=sys.stderr)
        return PIPELINE_ERROR
    except ValueError as exc:
        print(f"cfshap: error: {exc}", file=sys.stderr)
        return PIPELINE_ERROR


if __name__ == "__main__":
    sys.exit(main())
