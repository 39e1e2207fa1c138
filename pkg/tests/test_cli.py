import json

import pytest

from fracdecomp.cli import (
    EXIT_INADMISSIBLE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    run,
)
from fracdecomp.graph_core import make_complete


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "graph.json"
    assert run(["gen", "-r", "4", "-s", "3", "-n", "4", "--defects", "1",
                "--seed", "3", "--output", str(path)]) == EXIT_OK
    return path


class TestGen:
    def test_writes_valid_json(self, graph_file):
        data = json.loads(graph_file.read_text())
        assert data["r"] == 4 and data["s"] == 3 and data["n"] == 4
        assert len(data["missing_edges"]) == 6  # one transversal K_4

    def test_deterministic_per_seed(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["gen", "-r", "5", "-s", "3", "-n", "8", "--defects", "4",
                "--seed", "11"]
        assert run(args + ["--output", str(a)]) == EXIT_OK
        assert run(args + ["--output", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_missing_args_is_usage_error(self):
        assert run(["gen", "-r", "4"]) == EXIT_USAGE

    def test_unknown_command_is_usage_error(self):
        assert run(["frobnicate"]) == EXIT_USAGE


class TestCheck:
    def test_admissible_graph_exits_zero(self, graph_file, capsys):
        assert run(["check", "--input", str(graph_file)]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["nec1_ok"] and out["nec2_ok"]
        assert out["min_partite_degree"] == 3

    def test_inadmissible_graph_exits_two(self, tmp_path):
        g = make_complete(4, 3, 2).delete_edges([((0, 0), (1, 0))])
        path = tmp_path / "bad.json"
        path.write_text(g.to_json())
        assert run(["check", "--input", str(path)]) == EXIT_INADMISSIBLE

    def test_complete_from_parameters(self, capsys):
        assert run(["check", "-r", "5", "-s", "3", "-n", "2"]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["min_partite_degree"] == 2


class TestDecomposeAndVerify:
    def test_round_trip(self, graph_file, tmp_path):
        weights = tmp_path / "weights.json"
        report = tmp_path / "report.json"
        code = run(["decompose", "--input", str(graph_file),
                    "--output", str(weights), "--report", str(report)])
        assert code == EXIT_OK
        rep = json.loads(report.read_text())
        assert rep["converged"]
        assert rep["max_edge_sum_error"] < 1e-8
        assert rep["eta"] is not None  # r = s+1 path
        assert run(["verify", "--input", str(graph_file),
                    "--weights", str(weights)]) == EXIT_OK

    def test_deterministic_weights_file(self, graph_file, tmp_path):
        w1, w2 = tmp_path / "w1.json", tmp_path / "w2.json"
        for w in (w1, w2):
            assert run(["decompose", "--input", str(graph_file),
                        "--output", str(w),
                        "--report", str(tmp_path / "r.json")]) == EXIT_OK
        assert w1.read_bytes() == w2.read_bytes()

    def test_inadmissible_input_exits_two(self, tmp_path):
        g = make_complete(4, 3, 2).delete_edges([((0, 0), (1, 0))])
        path = tmp_path / "bad.json"
        path.write_text(g.to_json())
        assert run(["decompose", "--input", str(path),
                    "--output", str(tmp_path / "w.json")]) == EXIT_INADMISSIBLE

    def test_perturbed_weights_fail_verification(self, graph_file, tmp_path):
        weights = tmp_path / "weights.json"
        assert run(["decompose", "--input", str(graph_file),
                    "--output", str(weights),
                    "--report", str(tmp_path / "r.json")]) == EXIT_OK
        records = json.loads(weights.read_text())
        records[0]["weight"] += 1e-3
        weights.write_text(json.dumps(records))
        assert run(["verify", "--input", str(graph_file),
                    "--weights", str(weights)]) == EXIT_VERIFY_FAILED

    def test_clique_on_missing_edge_fails_verification(self, graph_file, tmp_path):
        g = json.loads(graph_file.read_text())
        p1, i1, p2, i2 = g["missing_edges"][0]
        other = next(p for p in range(4) if p not in (p1, p2))
        bad = [{"clique": [[p1, i1], [p2, i2], [other, 0]], "weight": 0.5}]
        weights = tmp_path / "w.json"
        weights.write_text(json.dumps(bad))
        assert run(["verify", "--input", str(graph_file),
                    "--weights", str(weights)]) == EXIT_VERIFY_FAILED


class TestInspectionCommands:
    def test_tables(self, tmp_path):
        out = tmp_path / "tables.json"
        assert run(["tables", "-r", "5", "-n", "2",
                    "--output", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["valencies"] == [1, 2, 1, 12, 12, 12]
        assert data["intersection_numbers"]["p^0"][3][3] == 12

    def test_spectrum(self, capsys):
        assert run(["spectrum", "-r", "5", "-s", "3", "-n", "2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["eigenvalues_float"] == [18, 8, 2, 12, 4, 6]
        assert data["multiplicities"] == [1, 4, 5, 5, 15, 10]

    def test_spectrum_eta(self, capsys):
        assert run(["spectrum", "-r", "4", "-s", "3", "-n", "2",
                    "--eta", "6/5"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert all(v > 0 for v in data["eigenvalues_float"])

    def test_xval_small_grid(self, tmp_path):
        out = tmp_path / "xval.json"
        assert run(["xval", "--r-values", "4", "5", "--s-values", "3",
                    "--n-values", "1", "2", "--output", str(out)]) == EXIT_OK
        rows = json.loads(out.read_text())
        assert len(rows) == 4
        assert all(row["spectrum"] == "pass" for row in rows)
