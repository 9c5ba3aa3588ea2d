import numpy as np
import pytest
from pydantic import ValidationError

from gfmmd.core.exceptions import InvalidInputError, UndefinedCorrelationError
from gfmmd.core.config import settings
from gfmmd.schemas.bench import BenchmarkReport, GridConfig, GridReport, LocalizationConfig, LocalizationReport, SwissRollConfig
from gfmmd.schemas.spectral import EngineSpec
from gfmmd.services.bench_harness import (
    KERNEL_MMD,
    SCATTER_COLUMNS,
    config_run_id,
    deterministic_dump,
    format_report_text,
    median_bandwidth,
    run_grid_experiment,
    run_localization_suite,
    run_swissroll_benchmark,
    spearman,
    write_report_json,
    write_scatter_csv,
)
from tests.factories import SMALL_SWISS_ROLL


def test_spearman_examples():
    """Test perfect, reversed and tied rank correlations"""
    x = np.arange(10.0)

    assert spearman(x, x ** 3) == 1.0
    assert spearman(x, -x) == -1.0

    tied_ranks = np.array([1.0, 2.5, 2.5, 4.0])
    expected = np.corrcoef(tied_ranks, np.arange(1.0, 5.0))[0, 1]
    assert spearman([1, 2, 2, 4], [1, 2, 3, 4]) == pytest.approx(expected, rel=1e-12)


def test_spearman_errors():
    """Test that constant sequences and bad lengths are rejected"""
    with pytest.raises(UndefinedCorrelationError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(InvalidInputError):
        spearman([1, 2], [1, 2, 3])
    with pytest.raises(InvalidInputError):
        spearman([1], [1])


def test_median_bandwidth():
    """Test the median heuristic on three collinear points"""
    samples = [np.array([[0.0], [1.0]]), np.array([[3.0]])]

    assert median_bandwidth(samples) == 2.0
    assert median_bandwidth([np.zeros((3, 2))]) == 1.0


def test_config_run_id_is_stable():
    """Test that equal configurations share a run id and different ones do not"""
    assert config_run_id(GridConfig()) == config_run_id(GridConfig())
    assert config_run_id(GridConfig()) != config_run_id(GridConfig(tau=8.0))


def test_swissroll_config_validation():
    """Test rejected swiss-roll configurations"""
    with pytest.raises(ValidationError):
        SwissRollConfig(n=5, nearest_k=5)
    with pytest.raises(ValidationError):
        SwissRollConfig(orders=[8, 8])
    with pytest.raises(ValidationError):
        SwissRollConfig(include_exact=False, orders=[])
    with pytest.raises(ValidationError):
        SwissRollConfig(n=2, m=2, k_nn=4, nearest_k=1)


def test_swissroll_config_defaults():
    """Test the resolved graph parameters of the default configuration"""
    config = SwissRollConfig(kernel="adaptive:7")

    assert config.resolved_k_nn() == 10
    assert config.kernel.k_bw == 7
    assert config.manifold_sigma == 4.0
    assert SwissRollConfig().resolved_kernel().k_bw == settings.adaptive_k_bw
    assert SwissRollConfig(n=2, m=3).resolved_k_nn() == 5


def test_small_swissroll_benchmark():
    """Test the report structure of a small swiss-roll run"""
    config = SwissRollConfig(**SMALL_SWISS_ROLL)
    report = run_swissroll_benchmark(config, threads=2)

    assert [m.method for m in report.methods] == ["exact", "cheby:8", KERNEL_MMD]
    assert len(report.graphs) == 2
    for method in report.methods:
        assert [s.seed for s in method.per_seed] == [0, 1]
        assert -1.0 <= method.rho_mean <= 1.0
        assert method.rho_std >= 0
    assert report.method("exact").per_seed[0].embedding_seconds > 0
    assert list(report.scatter.columns) == SCATTER_COLUMNS
    assert len(report.scatter) == 3 * 2 * (8 * 7 // 2)


def test_swissroll_fully_disconnected_graph_has_undefined_rho():
    """Test that a joint graph with one component per cloud reports rho as undefined instead of failing"""
    config = SwissRollConfig(n=4, m=3, noise_sigma=0.01, manifold_sigma=0.0, k_nn=2, kernel="gaussian:1",
                             orders=[8], seeds=[0], nearest_k=2, include_baseline=False)
    report = run_swissroll_benchmark(config)

    assert report.graphs[0].component_count == 4
    assert np.all(np.isinf(report.scatter["distance"]))
    for method in report.methods:
        assert method.per_seed[0].rho is None
        assert method.rho_mean is None and method.rho_std is None
    reread = BenchmarkReport.model_validate_json(report.model_dump_json())
    assert reread.method("exact").rho_mean is None
    assert "exact" in format_report_text(report)


def test_swissroll_benchmark_is_deterministic():
    """Test that reruns with a different worker count give identical reports apart from timings"""
    config = SwissRollConfig(**SMALL_SWISS_ROLL)
    first = run_swissroll_benchmark(config, threads=1)
    second = run_swissroll_benchmark(config, threads=2)

    assert deterministic_dump(first) == deterministic_dump(second)
    assert "all_pairs_seconds" not in str(deterministic_dump(first))


def test_grid_experiment():
    """Test translation distances, witnesses and bimodal localization on the 16×16 grid"""
    report = run_grid_experiment()

    assert report.offsets == [0, 2, 4, 6]
    assert report.distances[0] == 0.0
    assert report.distances_increasing
    assert all(np.diff(report.distances) > 0)
    assert report.witnesses[0] is None and report.witness_gaps[0] is None
    for distance, gap in zip(report.distances[1:], report.witness_gaps[1:]):
        assert gap == pytest.approx(distance, abs=1e-8)
    assert report.bimodal_nonincreasing
    assert len(report.relative_deviation) == 4
    assert len(report.normalized_bimodal_scores) == 4
    assert len(report.witnesses[1]) == 256


def test_grid_experiment_chebyshev_agrees_with_exact():
    """Test that the Chebyshev path keeps the translation ordering"""
    engine = EngineSpec.chebyshev(512)
    report = run_grid_experiment(GridConfig(engine=engine))
    exact = run_grid_experiment()

    assert report.distances[0] == 0.0
    assert report.distances_increasing
    np.testing.assert_allclose(report.distances[1:], exact.distances[1:], rtol=0.02)


def test_grid_config_rejects_bumps_off_the_grid():
    """Test that shifted bumps must fit on the grid"""
    with pytest.raises(ValidationError):
        GridConfig(center=(8, 12))


def test_localization_suite():
    """Test diffusion and hop-ball localization sequences on the grid"""
    report = run_localization_suite()

    assert report.center == 132
    assert report.diffusion_decreasing
    assert report.hop_nonincreasing
    assert report.hop_sizes[0] == 5
    assert report.hop_sizes[-1] == 256
    assert report.hop_scores[-1] == pytest.approx(0.0, abs=1e-10)


def test_localization_report_json_keeps_inf(write_text, tmp_path):
    """Test that infinite scores on a disconnected graph survive the JSON round trip"""
    edges = write_text("g.tsv", "0\t1\t1.0\n1\t2\t1.0\n3\t4\t1.0\n")
    report = run_localization_suite(LocalizationConfig(edges=edges, taus=[1.0, 2.0], hops=[0, 1]))
    path = tmp_path / "report.json"
    write_report_json(report, path)

    assert '"inf"' in path.read_text()
    reread = LocalizationReport.model_validate_json(path.read_text())
    assert reread.diffusion_scores == [np.inf, np.inf]
    assert not reread.diffusion_decreasing
    assert deterministic_dump(reread) == deterministic_dump(report)


def test_grid_report_round_trip(tmp_path):
    """Test that a grid report reloads to the same content"""
    report = run_grid_experiment(GridConfig(rows=8, cols=8, center=(4, 1), tau=4.0))
    path = tmp_path / "grid.json"
    write_report_json(report, path)

    assert deterministic_dump(GridReport.model_validate_json(path.read_text())) == deterministic_dump(report)


def test_report_text_and_scatter(tmp_path):
    """Test the text summary and the scatter CSV of a swiss-roll run"""
    report = run_swissroll_benchmark(SwissRollConfig(**{**SMALL_SWISS_ROLL, "seeds": [3]}))
    text = format_report_text(report)
    path = tmp_path / "scatter.csv"
    write_scatter_csv(report, path)

    assert "cheby:8" in text and KERNEL_MMD in text
    assert path.read_text().splitlines()[0] == ",".join(SCATTER_COLUMNS)
    assert "diffusion" in format_report_text(run_localization_suite())


@pytest.mark.slow
def test_swissroll_rank_correlation():
    """Test that GFMMD tracks geodesics and order-8 Chebyshev stays close to exact"""
    report = run_swissroll_benchmark(SwissRollConfig(orders=[8]))
    exact = report.method("exact").rho_mean
    cheby = report.method("cheby:8").rho_mean

    assert exact >= 0.5
    assert abs(exact - cheby) <= 0.05
    assert exact >= report.method(KERNEL_MMD).rho_mean - 0.05


@pytest.mark.slow
def test_chebyshev_beats_exact_on_large_graph():
    """Test that order-8 Chebyshev all-pairs time is below the exact path on 2000 points"""
    config = SwissRollConfig(n=50, m=40, orders=[8], seeds=[0], include_baseline=False)
    report = run_swissroll_benchmark(config)

    exact = report.method("exact").per_seed[0].all_pairs_seconds
    cheby = report.method("cheby:8").per_seed[0].all_pairs_seconds
    assert cheby < exact
