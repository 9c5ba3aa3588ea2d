import json
import logging

import numpy as np
import pandas as pd
import pytest

from gfmmd.cli.main import create_application, main
from gfmmd.core.config import override_settings
from gfmmd.schemas.bench import GridReport
from gfmmd.services.bench_harness import deterministic_dump
from gfmmd.services.graph_builder import grid_graph
from gfmmd.services.graph_io import read_distance_matrix, read_edge_list, write_edge_list
from tests.factories import SMALL_SWISS_ROLL


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop the console handler so each test logs to its own captured stream"""
    yield
    logger = logging.getLogger("gfmmd")
    for handler in [h for h in logger.handlers if getattr(h, "_gfmmd_handler", False)]:
        logger.removeHandler(handler)


@pytest.fixture
def grid_files(tmp_path):
    """16×16 grid edge list and Dirac signals at vertices 0, 255 and 15"""
    graph_path = tmp_path / "grid.tsv"
    write_edge_list(grid_graph(16, 16), graph_path)
    signals = np.zeros((256, 3))
    signals[[0, 255, 15], [0, 1, 2]] = 1.0
    signals_path = tmp_path / "diracs.csv"
    pd.DataFrame(signals, columns=["corner", "opposite", "edge"]).to_csv(signals_path, index=False)
    return str(graph_path), str(signals_path)


def test_build_graph_from_points(write_text, tmp_path, capsys):
    """Test that build-graph writes a k-NN graph and prints its summary"""
    points = write_text("points.csv", "0\n1\n3\n")
    out = tmp_path / "graph.tsv"

    assert main(["build-graph", "--points", points, "--knn", "1", "--kernel", "gaussian:1", "--out", str(out)]) == 0
    graph = read_edge_list(out)
    assert graph.n == 3
    assert graph.edge_count == 2
    assert graph.adjacency[0, 1] == pytest.approx(np.exp(-1.0))
    assert graph.adjacency[1, 2] == pytest.approx(np.exp(-4.0))
    assert "components" in capsys.readouterr().out


def test_build_graph_edge_passthrough_is_idempotent(write_text, tmp_path):
    """Test that canonicalizing an edge list twice gives the same file"""
    edges = write_text("in.tsv", "2\t0\t0.25\n0\t1\t1.5\n")
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"

    assert main(["build-graph", "--edges", edges, "--out", str(first)]) == 0
    assert main(["build-graph", "--edges", str(first), "--out", str(second)]) == 0
    assert first.read_text() == second.read_text()


def test_build_graph_empty_file(write_text, tmp_path, capsys):
    """Test that an empty edge list exits with a parse error"""
    edges = write_text("empty.tsv", "")

    assert main(["build-graph", "--edges", edges, "--out", str(tmp_path / "out.tsv")]) == 1
    assert "error [PARSE_ERROR]" in capsys.readouterr().err


def test_distances_identical_and_disconnected(write_text, tmp_path):
    """Test zero distance for identical columns and inf across components"""
    graph = write_text("g.tsv", "0\t1\t1.0\n2\t3\t1.0\n")
    signals = write_text("s.csv", "A,B,C\n1,1,0\n0,0,0\n0,0,1\n0,0,0\n")
    out = tmp_path / "d.csv"
    embeddings = tmp_path / "e.csv"

    assert main(["distances", "--graph", graph, "--signals", signals, "--out", str(out),
                 "--embeddings", str(embeddings)]) == 0
    D = read_distance_matrix(out)
    assert D.labels == ["A", "B", "C"]
    assert D.values[0, 1] == 0.0
    assert D.values[0, 2] == np.inf
    assert "inf" in out.read_text()
    assert pd.read_csv(embeddings, index_col=0).shape == (3, 4)


def test_distances_chebyshev_matches_exact(grid_files, tmp_path):
    """Test that order-512 Chebyshev distances are within 1% of the exact path on the grid"""
    graph, signals = grid_files
    exact_out, cheby_out = tmp_path / "exact.csv", tmp_path / "cheby.csv"

    assert main(["distances", "--graph", graph, "--signals", signals, "--out", str(exact_out)]) == 0
    assert main(["distances", "--graph", graph, "--signals", signals, "--engine", "cheby:512",
                 "--out", str(cheby_out)]) == 0

    exact = read_distance_matrix(exact_out).values
    cheby = read_distance_matrix(cheby_out).values
    for i, j in [(0, 1), (0, 2)]:
        assert cheby[i, j] == pytest.approx(exact[i, j], rel=0.01)


def test_localize_ranks_concentrated_signal_first(write_text, tmp_path):
    """Test that a Dirac outranks the uniform distribution on a path"""
    graph = write_text("g.tsv", "0\t1\t1.0\n1\t2\t1.0\n2\t3\t1.0\n3\t4\t1.0\n")
    signals = write_text("s.csv", "uniform,dirac,half\n1,0,0\n1,0,0\n1,1,1\n1,0,1\n1,0,0\n")
    out = tmp_path / "scores.csv"

    assert main(["localize", "--graph", graph, "--signals", signals, "--out", str(out)]) == 0
    scores = pd.read_csv(out)
    assert list(scores["label"]) == ["dirac", "half", "uniform"]
    assert scores["score"].iloc[-1] == pytest.approx(0.0, abs=1e-10)


def test_witness_single_edge(write_text, tmp_path, capsys):
    """Test the witness between the two Diracs of a unit edge"""
    graph = write_text("g.tsv", "0\t1\t1.0\n")
    signals = write_text("s.csv", "P,Q\n1,0\n0,1\n")
    out = tmp_path / "w.csv"

    assert main(["witness", "--graph", graph, "--signals", signals, "--pair", "P,Q", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "vertex,witness"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.5)
    assert float(lines[2].split(",")[1]) == pytest.approx(-0.5)
    assert lines[3].startswith("gap,")
    assert float(lines[3].split(",")[1]) == pytest.approx(1.0)
    assert "gap" in capsys.readouterr().out


def test_witness_identical_pair(write_text, tmp_path, capsys):
    """Test that equal distributions have no witness"""
    graph = write_text("g.tsv", "0\t1\t1.0\n")
    signals = write_text("s.csv", "P,Q\n1,1\n0,0\n")

    assert main(["witness", "--graph", graph, "--signals", signals, "--pair", "P,Q",
                 "--out", str(tmp_path / "w.csv")]) == 1
    assert "error [UNDEFINED_WITNESS]" in capsys.readouterr().err


def test_witness_rejects_chebyshev_flags(write_text, tmp_path):
    """Test that witness accepts no engine selection"""
    graph = write_text("g.tsv", "0\t1\t1.0\n")
    signals = write_text("s.csv", "P,Q\n1,0\n0,1\n")

    assert main(["witness", "--graph", graph, "--signals", signals, "--pair", "P,Q", "--engine", "cheby",
                 "--out", str(tmp_path / "w.csv")]) == 2


def test_dimension_mismatch(write_text, tmp_path, capsys):
    """Test that signal rows must match the vertex count"""
    graph = write_text("g.tsv", "# n=4\n0\t1\t1.0\n")
    signals = write_text("s.csv", "A\n1\n2\n3\n")

    assert main(["distances", "--graph", graph, "--signals", signals, "--out", str(tmp_path / "d.csv")]) == 1
    assert "error [DIMENSION_MISMATCH]" in capsys.readouterr().err


def test_exact_engine_with_order_is_rejected(write_text, tmp_path, capsys):
    """Test that --order conflicts with the exact engine"""
    graph = write_text("g.tsv", "0\t1\t1.0\n")
    signals = write_text("s.csv", "A\n1\n1\n")

    assert main(["distances", "--graph", graph, "--signals", signals, "--engine", "exact", "--order", "5",
                 "--out", str(tmp_path / "d.csv")]) == 1
    assert "error [INVALID_CONFIG]" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    """Test that a missing input file is reported as an I/O error"""
    missing = str(tmp_path / "missing.tsv")

    assert main(["distances", "--graph", missing, "--signals", missing, "--out", str(tmp_path / "d.csv")]) == 1
    assert "error [IO_ERROR]" in capsys.readouterr().err


def test_help_names_the_application():
    """Test that the parser description carries the configured application name"""
    with override_settings(app_name="Resistance Distances"):
        parser = create_application()

    assert parser.description.startswith("Resistance Distances:")
    assert "Resistance Distances" in parser.format_help()


def test_usage_error_exit_code(capsys):
    """Test that argparse usage errors exit with status 2"""
    assert main(["distances"]) == 2
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_bench_grid_is_deterministic(tmp_path):
    """Test that the grid experiment writes its reports and reruns identically"""
    first, second = tmp_path / "a.json", tmp_path / "b.json"

    assert main(["bench", "grid", "--out", str(first)]) == 0
    assert main(["bench", "grid", "--out", str(second)]) == 0
    assert (tmp_path / "a.txt").exists()

    reports = [GridReport.model_validate_json(p.read_text()) for p in (first, second)]
    assert deterministic_dump(reports[0]) == deterministic_dump(reports[1])
    assert reports[0].distances_increasing


def test_bench_swissroll_small_config(tmp_path):
    """Test a small swiss-roll run from a configuration file"""
    config = tmp_path / "swiss.json"
    config.write_text(json.dumps(SMALL_SWISS_ROLL))
    out = tmp_path / "swiss_report.json"

    assert main(["bench", "swissroll", "--config", str(config), "--seed", "4", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert [m["method"] for m in report["methods"]] == ["exact", "cheby:8", "kernel_mmd"]
    assert [s["seed"] for s in report["methods"][0]["per_seed"]] == [4]

    scatter = pd.read_csv(tmp_path / "swiss_report_scatter.csv")
    assert len(scatter) == 3 * (8 * 7 // 2)


def test_bench_invalid_config(tmp_path, capsys):
    """Test that a configuration violating the schema is rejected"""
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"tau": -1.0}))

    assert main(["bench", "grid", "--config", str(config), "--out", str(tmp_path / "r.json")]) == 1
    assert "error [INVALID_CONFIG]" in capsys.readouterr().err


def test_bench_swissroll_disconnected_graph_completes(tmp_path):
    """Test that a swiss-roll run whose clouds share no edges still writes its report"""
    config = tmp_path / "split.json"
    config.write_text(json.dumps(dict(n=4, m=3, noise_sigma=0.01, manifold_sigma=0.0, k_nn=2, kernel="gaussian:1",
                                      orders=[8], seeds=[0], nearest_k=2, include_baseline=False)))
    out = tmp_path / "split_report.json"

    assert main(["bench", "swissroll", "--config", str(config), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert [m["rho_mean"] for m in report["methods"]] == [None, None]
