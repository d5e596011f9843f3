import json

import pytest

from conrel.cli import main

CONFLICT_DOC = {
    "name": "conflict-pair",
    "variables": [
        {"name": "x1", "lower": -3, "upper": 3},
        {"name": "x2", "lower": -3, "upper": 3},
    ],
    "constraints": [
        {"name": "g1", "kind": "inequality", "expr": "x1*exp(-x1^2-x2^2)"},
        {"name": "g2", "kind": "inequality", "expr": "-0.1-x1*exp(-x1^2-x2^2)"},
    ],
}


@pytest.fixture
def conflict_file(write_problem):
    return write_problem(CONFLICT_DOC, "conflict.json")


class TestAnalyze:
    def test_writes_report_with_conflict_edge(self, conflict_file, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            ["analyze", str(conflict_file), "--samples", "200", "--seed", "42",
             "--out", str(out)]
        )
        assert code == 0
        document = json.loads(out.read_text())
        edges = {(e["i"], e["j"]): e["label"] for e in document["graph"]["edges"]}
        assert edges[("g1", "g2")] == "TOTAL_CONFLICT"

    def test_csv_output(self, conflict_file, tmp_path):
        out = tmp_path / "report.json"
        csv_path = tmp_path / "matrix.csv"
        code = main(
            ["analyze", str(conflict_file), "--samples", "50", "--seed", "1",
             "--out", str(out), "--csv", str(csv_path)]
        )
        assert code == 0
        assert "TC" in csv_path.read_text()

    def test_single_sample_rejected(self, conflict_file, tmp_path, capsys):
        code = main(
            ["analyze", str(conflict_file), "--samples", "1", "--seed", "1",
             "--out", str(tmp_path / "r.json")]
        )
        assert code == 1
        assert "at least 2 samples" in capsys.readouterr().err

    def test_byte_identical_reports(self, conflict_file, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        argv = ["analyze", str(conflict_file), "--samples", "80", "--seed", "3", "--out"]
        assert main(argv + [str(a)]) == 0
        assert main(argv + [str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_missing_file(self, tmp_path, capsys):
        code = main(
            ["analyze", str(tmp_path / "nope.json"), "--seed", "1",
             "--out", str(tmp_path / "r.json")]
        )
        assert code == 1

    def test_usage_error_exits_1(self, conflict_file, tmp_path, capsys):
        # missing required --seed; exit 2 is reserved for numerical failures
        code = main(["analyze", str(conflict_file), "--out", str(tmp_path / "r.json")])
        assert code == 1

    def test_help_exits_0(self, capsys):
        assert main(["--help"]) == 0
        assert "analyze" in capsys.readouterr().out

    def test_invalid_document(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        code = main(["analyze", str(bad), "--seed", "1", "--out", str(tmp_path / "r.json")])
        assert code == 1

    def test_non_finite_value_exits_2(self, write_problem, tmp_path, capsys):
        doc = {
            "name": "bad",
            "variables": [{"name": "x1", "lower": -1, "upper": 1}],
            "constraints": [
                {"name": "ok", "kind": "inequality", "expr": "x1"},
                {"name": "logx", "kind": "inequality", "expr": "log(x1)"},
            ],
        }
        path = write_problem(doc, "nonfinite.json")
        code = main(["analyze", str(path), "--seed", "1", "--out", str(tmp_path / "r.json")])
        assert code == 2
        err = capsys.readouterr().err
        assert "logx" in err


class TestPair:
    def test_verbose_evidence_and_svgs(self, conflict_file, tmp_path, capsys):
        par = tmp_path / "par.svg"
        sca = tmp_path / "sca.svg"
        code = main(
            ["pair", str(conflict_file), "-i", "g1", "-j", "g2", "--samples", "60",
             "--seed", "2", "--svg-parallel", str(par), "--svg-scatter", str(sca)]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["label"] == "TOTAL_CONFLICT"
        assert payload["crossings"] == payload["evidence"]["conflict_pairs"]
        assert par.exists() and sca.exists()

    def test_unknown_constraint_name(self, conflict_file, capsys):
        code = main(["pair", str(conflict_file), "-i", "g1", "-j", "gX", "--seed", "1"])
        assert code == 1
        assert "gX" in capsys.readouterr().err


class TestGradients:
    def test_aggregates(self, conflict_file, capsys):
        code = main(["gradients", str(conflict_file), "--samples", "40", "--seed", "2"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pairs"][0]["mean_conflict"] == pytest.approx(1.0, abs=1e-9)


class TestDecompose:
    def test_independent_split(self, write_problem, capsys):
        doc = {
            "name": "indep",
            "variables": [
                {"name": "x1", "lower": -3, "upper": 3},
                {"name": "x2", "lower": -3, "upper": 3},
            ],
            "constraints": [
                {"name": "a", "kind": "inequality", "expr": "2*sin(x1)-1"},
                {"name": "b", "kind": "inequality", "expr": "x2^2-1"},
            ],
        }
        path = write_problem(doc, "indep.json")
        code = main(["decompose", str(path), "--samples", "30", "--seed", "5"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["subproblems"] == [
            {"constraints": ["a"], "variables": ["x1"]},
            {"constraints": ["b"], "variables": ["x2"]},
        ]


class TestInfer:
    def test_infer_over_report(self, write_problem, tmp_path, capsys):
        doc = {
            "name": "chain",
            "variables": [{"name": "x1", "lower": -5, "upper": 5}],
            "constraints": [
                {"name": "a", "kind": "inequality", "expr": "x1"},
                {"name": "b", "kind": "inequality", "expr": "x1+1"},
                {"name": "c", "kind": "inequality", "expr": "-x1"},
            ],
        }
        path = write_problem(doc, "chain.json")
        report_path = tmp_path / "report.json"
        assert main(
            ["analyze", str(path), "--samples", "40", "--seed", "1", "--out", str(report_path)]
        ) == 0
        code = main(["infer", "--report", str(report_path)])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["inferred"] == []  # all pairs already measured
        assert payload["contradictions"] == []

    def test_updated_report_written(self, conflict_file, tmp_path):
        report_path = tmp_path / "report.json"
        main(["analyze", str(conflict_file), "--samples", "40", "--seed", "1",
              "--out", str(report_path)])
        out = tmp_path / "updated.json"
        assert main(["infer", "--report", str(report_path), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["graph"]["edges"]

    def test_contradictory_report_surfaces_contradiction(self, tmp_path, capsys):
        # hand-built report whose measured total labels close an odd cycle
        def pair(i, j, label):
            return {
                "i": i,
                "j": j,
                "label": label,
                "harmony_magnitude": None,
                "conflict_magnitude": None,
                "independence": {"effective_independent": False},
            }

        report = {
            "problem": {
                "name": "synthetic",
                "variables": [{"name": "x1", "lower": -1, "upper": 1}],
                "constraints": [
                    {"name": "a", "kind": "inequality", "expr": "x1"},
                    {"name": "b", "kind": "inequality", "expr": "x1"},
                    {"name": "c", "kind": "inequality", "expr": "x1"},
                ],
            },
            "pairs": [
                pair("a", "b", "TOTAL_HARMONY"),
                pair("b", "c", "TOTAL_CONFLICT"),
                pair("a", "c", "TOTAL_HARMONY"),
            ],
        }
        path = tmp_path / "synthetic.json"
        path.write_text(json.dumps(report))
        assert main(["infer", "--report", str(path)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["contradictions"] == [
            {
                "i": "a",
                "j": "c",
                "measured": "TOTAL_HARMONY",
                "implied": "TOTAL_CONFLICT",
                "witness": ["a", "b", "c"],
            }
        ]


class TestGenerate:
    def test_affine_with_labels(self, tmp_path):
        problem_path = tmp_path / "p.json"
        labels_path = tmp_path / "labels.json"
        code = main(
            ["generate", "--family", "affine", "--n", "2", "--m", "4",
             "--plan", "random", "--seed", "7", "--out", str(problem_path),
             "--labels", str(labels_path)]
        )
        assert code == 0
        from conrel.problem import load_problem_file

        problem = load_problem_file(problem_path)
        assert problem.dimension == 2
        assert len(problem.constraints) == 4
        labels = json.loads(labels_path.read_text())
        assert len(labels["pairs"]) == 6

    def test_affine_plan_file(self, tmp_path):
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(
            json.dumps({"pairs": [{"i": "c1", "j": "c2", "label": "TOTAL_CONFLICT"}]})
        )
        out = tmp_path / "p.json"
        labels = tmp_path / "l.json"
        code = main(
            ["generate", "--family", "affine", "--n", "2", "--m", "2",
             "--plan", str(plan_path), "--seed", "3", "--out", str(out),
             "--labels", str(labels)]
        )
        assert code == 0
        assert json.loads(labels.read_text())["pairs"][0]["label"] == "TOTAL_CONFLICT"

    def test_unrealizable_plan(self, tmp_path, capsys):
        code = main(
            ["generate", "--family", "affine", "--n", "3", "--m", "3",
             "--plan", "TC", "--seed", "1", "--out", str(tmp_path / "p.json")]
        )
        assert code == 1

    def test_paper_family(self, tmp_path):
        out = tmp_path / "harmony.json"
        code = main(
            ["generate", "--family", "paper", "--plan", "harmony",
             "--seed", "0", "--out", str(out)]
        )
        assert code == 0
        from conrel.problem import load_problem_file

        problem = load_problem_file(out)
        assert problem.name == "harmony-pair"

    def test_paper_family_default_merged(self, tmp_path):
        out = tmp_path / "merged.json"
        assert main(
            ["generate", "--family", "paper", "--seed", "0", "--out", str(out)]
        ) == 0
        from conrel.problem import load_problem_file

        assert len(load_problem_file(out).constraints) == 6


class TestPlot:
    def test_parallel_from_report(self, conflict_file, tmp_path):
        report_path = tmp_path / "report.json"
        main(["analyze", str(conflict_file), "--samples", "40", "--seed", "1",
              "--out", str(report_path)])
        out = tmp_path / "plot.svg"
        code = main(
            ["plot", "--report", str(report_path), "--pair", "g1,g2",
             "--kind", "parallel", "--out", str(out)]
        )
        assert code == 0
        assert out.read_text().startswith("<svg")

    def test_scatter_from_report(self, conflict_file, tmp_path):
        report_path = tmp_path / "report.json"
        main(["analyze", str(conflict_file), "--samples", "40", "--seed", "1",
              "--out", str(report_path)])
        out = tmp_path / "scatter.svg"
        assert main(
            ["plot", "--report", str(report_path), "--pair", "g1,g2",
             "--kind", "scatter", "--out", str(out)]
        ) == 0
        assert out.exists()

    def test_bad_pair_argument(self, conflict_file, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        main(["analyze", str(conflict_file), "--samples", "40", "--seed", "1",
              "--out", str(report_path)])
        code = main(
            ["plot", "--report", str(report_path), "--pair", "g1",
             "--kind", "scatter", "--out", str(tmp_path / "x.svg")]
        )
        assert code == 1
