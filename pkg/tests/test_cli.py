"""Command-line interface: subcommands, exit codes, determinism."""

from cfshap.cli import main


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage failures
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsageErrors:
    def test_unknown_model_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "evaluate", "--dataset", "iris", "--model", "boost")
        assert code == 1

    def test_missing_required_flag_exits_1(self, capsys):
        code, _, _ = run_cli(capsys, "evaluate", "--dataset", "iris")
        assert code == 1

    def test_unknown_subcommand_exits_1(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 1

    def test_negative_seed_exits_1(self, capsys):
        code, _, _ = run_cli(
            capsys, "evaluate", "--dataset", "iris", "--model", "svm", "--seed", "-3"
        )
        assert code == 1

    def test_bad_point_string_exits_1(self, capsys):
        code, _, err = run_cli(
            capsys, "explain", "--dataset", "iris", "--model", "svm",
            "--point", "a,b,c,d", "--desired", "1",
        )
        assert code == 1
        assert "could not parse" in err

    def test_wrong_point_length_exits_1(self, capsys):
        code, _, err = run_cli(
            capsys, "explain", "--dataset", "iris", "--model", "svm",
            "--point", "1,2", "--desired", "1",
        )
        assert code == 1

    def test_desired_equal_to_prediction_exits_1(self, capsys):
        code, _, err = run_cli(
            capsys, "explain", "--dataset", "iris", "--model", "svm",
            "--point", "4.4,2.9,1.4,0.2", "--desired", "0",
        )
        assert code == 1
        assert "not contrastive" in err


class TestPipelineErrors:
    def test_missing_csv_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "evaluate", "--dataset", str(tmp_path / "nope.csv"),
            "--label-column", "y", "--model", "svm",
        )
        assert code == 2

    def test_single_class_csv_exits_2(self, capsys, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("a,label\n1,0\n2,0\n")
        code, _, err = run_cli(
            capsys, "evaluate", "--dataset", str(path), "--label-column", "label",
            "--model", "svm",
        )
        assert code == 2
        assert "fewer than 2 classes" in err


class TestEvaluate:
    def test_markdown_to_stdout(self, capsys):
        code, out, _ = run_cli(
            capsys, "evaluate", "--dataset", "iris", "--model", "svm",
            "--max-points", "4",
        )
        assert code == 0
        assert "| Model | CFs | CPs | Ratio | Avg |" in out

    def test_report_file_and_determinism(self, capsys, tmp_path):
        args = [
            "evaluate", "--dataset", "iris", "--model", "svm",
            "--seed", "42", "--split", "0.8",
        ]
        first = tmp_path / "a.md"
        second = tmp_path / "b.md"
        assert run_cli(capsys, *args, "--out", str(first))[0] == 0
        assert run_cli(capsys, *args, "--out", str(second))[0] == 0
        assert first.read_bytes() == second.read_bytes()

    def test_csv_output(self, capsys, tmp_path):
        out_path = tmp_path / "report.csv"
        code, _, _ = run_cli(
            capsys, "evaluate", "--dataset", "iris", "--model", "knn",
            "--max-points", "4", "--out", str(out_path),
        )
        assert code == 0
        assert out_path.read_text().splitlines()[-1].startswith("iris,knn,")


class TestExplain:
    def test_worked_example_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "explain", "--dataset", "iris", "--model", "svm",
            "--point", "4.4,2.9,1.4,0.2", "--desired", "1",
        )
        assert code == 0
        assert "Why setosa not versicolor?" in out
        assert "Algorithms Pro classification was primarily influenced by" in out
        assert "Algorithms Anti classification was primarily influenced by" in out
        assert "Counterfactual points" in out

    def test_custom_csv_explain(self, capsys, tmp_path):
        rows = ["x,y,label"]
        for i in range(20):
            rows.append(f"{i},{i % 7},{int(i >= 10)}")
        path = tmp_path / "toy.csv"
        path.write_text("\n".join(rows) + "\n")
        code, out, _ = run_cli(
            capsys, "explain", "--dataset", str(path), "--label-column", "label",
            "--model", "knn", "--point", "2,3", "--desired", "1",
        )
        assert code == 0
