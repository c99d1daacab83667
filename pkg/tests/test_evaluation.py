"""Evaluation harness: query enumeration, counting, reports."""

import numpy as np
import pytest

import cfshap as cf
from cfshap.data import Dataset, FeatureSpec
from cfshap.evaluation import EvalConfig, EvaluationReport


def small_report(**overrides):
    values = dict(
        dataset="iris",
        model="svm",
        total_queries=60,
        cfs=400,
        cps=80,
        ratio=20.0,
        avg=400 / 60,
        fallback_count=2,
        config_fingerprint="f" * 64,
        cfs_raw=450,
    )
    values.update(overrides)
    return EvaluationReport(**values)


class TestEnumerateQueries:
    def test_three_classes_thirty_points(self, iris_std, iris_split, iris_models):
        queries = cf.enumerate_queries(
            iris_std, iris_split.test_indices, iris_models["svm"]
        )
        assert len(queries) == 60

    def test_two_classes_ten_points(self, constant_model):
        ds = Dataset(
            name="tiny",
            features=(FeatureSpec("x", "continuous"),),
            points=np.linspace(0, 1, 10)[:, None],
            labels=np.array([0, 1] * 5),
            class_names=("a", "b"),
        )
        model = constant_model([1.0, 0.0], feature_count=1)
        queries = cf.enumerate_queries(ds, np.arange(10), model)
        assert len(queries) == 10

    def test_four_classes_single_point(self, constant_model):
        ds = Dataset(
            name="tiny4",
            features=(FeatureSpec("x", "continuous"),),
            points=np.arange(4.0)[:, None],
            labels=np.arange(4),
            class_names=("a", "b", "c", "d"),
        )
        model = constant_model([0.0, 1.0, 0.0, 0.0], feature_count=1)
        queries = cf.enumerate_queries(ds, np.array([0]), model)
        assert len(queries) == 3
        assert sorted(q.desired for q in queries) == [0, 2, 3]
        assert all(q.predicted == 1 for q in queries)


class TestCountCommon:
    def test_rows_copied_from_dataset(self, iris_std):
        rows = iris_std.points[[3, 40, 90]]
        assert cf.count_common(rows, iris_std) == 3

    def test_empty_sequence(self, iris_std):
        assert cf.count_common(np.empty((0, 4)), iris_std) == 0

    def test_perturbation_above_tolerance_excluded(self, iris_std):
        row = iris_std.points[3].copy()
        perturbed = row.copy()
        perturbed[0] += 1e-3
        assert cf.count_common(np.vstack([row, perturbed]), iris_std) == 1


class TestRunEvaluation:
    def test_iris_svm_accounting(self, iris):
        config = EvalConfig()
        report = cf.run_evaluation(iris, "svm", config)
        assert report.total_queries == 60
        assert 0 <= report.cps <= report.cfs
        assert abs(report.avg * report.total_queries - report.cfs) < 1e-9
        assert abs(report.ratio - 100.0 * report.cps / max(report.cfs, 1)) < 1e-9
        assert report.cfs_raw >= report.cfs

    def test_determinism_byte_for_byte(self, iris):
        config = EvalConfig()
        a = cf.run_evaluation(iris, "svm", config)
        b = cf.run_evaluation(iris, "svm", config)
        assert cf.emit_report([a]) == cf.emit_report([b])
        assert a.config_fingerprint == b.config_fingerprint

    def test_max_eval_points_bounds_queries(self, iris):
        report = cf.run_evaluation(iris, "svm", EvalConfig(max_eval_points=5))
        assert report.total_queries == 10

    def test_degenerate_model_all_fallbacks(self, tmp_path):
        # a single class-1 training point can never win a k=5 vote, so the
        # model predicts class 0 everywhere and no mutant or fallback
        # reaches class 1
        rng = np.random.default_rng(2)
        cluster = rng.normal(0.0, 0.5, size=(28, 2))
        inner = rng.normal(0.0, 0.05, size=(2, 2))
        lines = ["x,y,label"]
        for row in cluster:
            lines.append(f"{row[0]},{row[1]},0")
        for row in inner:
            lines.append(f"{row[0]},{row[1]},1")
        path = tmp_path / "degenerate.csv"
        path.write_text("\n".join(lines) + "\n")
        ds = cf.load_csv(path, label_column="label")
        report = cf.run_evaluation(ds, "knn", EvalConfig(seed=0))
        assert report.cfs == 0
        assert report.ratio == 0.0
        assert report.fallback_count == report.total_queries
        assert report.total_queries > 0


class TestEmitReport:
    def test_empty_sequence_header_only(self):
        text = cf.emit_report([])
        assert "| Model | CFs | CPs | Ratio | Avg |" in text
        assert text.count("\n") <= 4

    def test_single_report_formatting(self):
        text = cf.emit_report([small_report()])
        assert "| svm | 400 | 80 | 20.00% | 6.67 | 60 | 2 | 450 |" in text
        assert "## iris" in text

    def test_four_reports_in_input_order(self):
        reports = [small_report(model=m) for m in ("svm", "rf", "nn", "knn")]
        text = cf.emit_report(reports)
        rows = [line for line in text.splitlines() if line.startswith("| ") and "CFs" not in line and "---" not in line]
        assert [row.split("|")[1].strip() for row in rows] == ["svm", "rf", "nn", "knn"]

    def test_csv_format(self):
        text = cf.emit_report([small_report()], format="csv")
        assert "dataset,model,cfs,cps,ratio,avg,queries,fallbacks,cfs_raw" in text
        assert "iris,svm,400,80,20.00,6.67,60,2,450" in text

    def test_header_documents_policy(self):
        text = cf.emit_report([small_report()])
        assert "deduplicated" in text
        assert "Avg divides CFs by the number of queries" in text

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            cf.emit_report([], format="xml")


class TestReportInvariants:
    def test_cps_cannot_exceed_cfs(self):
        with pytest.raises(ValueError):
            small_report(cps=500)

    def test_ratio_must_match_counts(self):
        with pytest.raises(ValueError):
            small_report(ratio=99.0)

    def test_avg_must_match_counts(self):
        with pytest.raises(ValueError):
            small_report(avg=1.0)
