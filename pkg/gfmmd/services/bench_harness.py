"""
Desk-scale experiments.

- swiss roll: GFMMD (exact and Chebyshev) and the kernel-MMD baseline
  between point clouds, scored by Spearman-ρ against analytic geodesics;
- grid: distances, witnesses and bimodal localization for translated heat bumps;
- localization: diffusion and hop-neighborhood localization sequences.
"""

import hashlib
import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist
from scipy.stats import rankdata

from gfmmd.core.exceptions import InvalidInputError, UndefinedCorrelationError
from gfmmd.core.parallel import map_blocks
from gfmmd.core.seeding import BASELINE_STREAM, make_rng
from gfmmd.models.datasets import SwissRollDataset
from gfmmd.models.signals import DistanceMatrix
from gfmmd.schemas.bench import (
    REFERENCE_BIMODAL_SCORES,
    BenchmarkReport,
    GridConfig,
    GridReport,
    LocalizationConfig,
    LocalizationReport,
    MethodResult,
    SeedResult,
    SwissRollConfig,
)
from gfmmd.schemas.common import TIMING_FIELDS, BaseReport, EngineKind
from gfmmd.schemas.graph import GraphStats
from gfmmd.schemas.spectral import EngineSpec
from gfmmd.services.gfmmd_metric import (
    GraphFourierMMD,
    nearest_distributions,
    normalize_signals,
    pairwise_distances,
)
from gfmmd.services.graph_builder import build_knn_graph, graph_stats, grid_graph, hop_distribution
from gfmmd.services.graph_io import read_edge_list
from gfmmd.services.kernel_mmd import kernel_mmd_baseline
from gfmmd.services.swiss_roll import sample_swiss_roll

logger = logging.getLogger(__name__)

KERNEL_MMD = "kernel_mmd"
SCATTER_COLUMNS = ["method", "seed", "i", "j", "geodesic", "distance"]

PathLike = Union[str, Path]


def spearman(x, y) -> float:
    """
    Spearman rank correlation

    Pearson correlation of average ranks; tied values share their mean rank.

    Raises:
        InvalidInputError: On unequal lengths or fewer than 2 values
        UndefinedCorrelationError: If either side has constant ranks
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise InvalidInputError(f"Length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise InvalidInputError("Spearman correlation needs at least 2 values")
    rx = rankdata(x) - (x.size + 1) / 2.0
    ry = rankdata(y) - (y.size + 1) / 2.0
    denominator = np.sqrt(np.dot(rx, rx) * np.dot(ry, ry))
    if denominator == 0.0:
        raise UndefinedCorrelationError("Spearman correlation undefined: zero rank variance")
    return float(np.clip(np.dot(rx, ry) / denominator, -1.0, 1.0))


def config_run_id(config) -> str:
    """Stable identifier of a benchmark configuration"""
    return hashlib.sha256(config.model_dump_json().encode()).hexdigest()[:12]


def deterministic_dump(report: BaseReport) -> Dict[str, Any]:
    """JSON-mode dump of a report with the wall-clock fields removed"""
    return _strip_timing(report.model_dump(mode="json"))


def _strip_timing(value):
    if isinstance(value, dict):
        return {k: _strip_timing(v) for k, v in value.items() if k not in TIMING_FIELDS}
    if isinstance(value, list):
        return [_strip_timing(v) for v in value]
    return value


def _is_monotone(values: List[float], increasing: bool, strict: bool) -> bool:
    diffs = np.diff(np.asarray(values, dtype=float))
    if not increasing:
        diffs = -diffs
    return bool(np.all(diffs > 0) if strict else np.all(diffs >= 0))


# Swiss roll

def median_bandwidth(samples: List[np.ndarray]) -> float:
    """Median pairwise distance over all pooled samples (1.0 when degenerate)"""
    distances = pdist(np.vstack(samples))
    distances = distances[distances > 0]
    return float(np.median(distances)) if distances.size else 1.0


def _baseline_matrix(data: SwissRollDataset, config: SwissRollConfig) -> np.ndarray:
    """Kernel-MMD² between clouds, each subsampled with replacement"""
    rng = make_rng(data.seed, BASELINE_STREAM)
    samples = [cloud[rng.integers(0, data.m, size=config.mmd_samples)] for cloud in data.clouds]
    sigma = config.mmd_sigma if config.mmd_sigma is not None else median_bandwidth(samples)
    values = np.zeros((data.n, data.n))
    for i in range(data.n):
        for j in range(i + 1, data.n):
            values[i, j] = values[j, i] = kernel_mmd_baseline(samples[i], samples[j], sigma)
    return values


def _rank_correlation(name: str, seed: int, distances: np.ndarray, geodesics: np.ndarray) -> Optional[float]:
    try:
        return spearman(distances, geodesics)
    except UndefinedCorrelationError:
        logger.warning("Seed %d: %s distances are all tied (%s), rho is undefined",
                       seed, name, "all infinite" if np.all(np.isinf(distances)) else "constant")
        return None


def _format_rho(rho: Optional[float]) -> str:
    return "undefined" if rho is None else f"{rho:.3f}"


def _run_seed(config: SwissRollConfig, seed: int) -> Tuple[GraphStats, Dict[str, SeedResult], List[tuple]]:
    data = sample_swiss_roll(config.n, config.m, config.noise_sigma, config.ambient_dim, seed,
                             manifold_sigma=config.manifold_sigma)
    graph = build_knn_graph(data.stacked_points(), config.resolved_k_nn(), config.resolved_kernel())
    metric = GraphFourierMMD(graph, threads=1)
    stats = graph_stats(graph, metric.components)
    if stats.component_count > 1:
        logger.warning("Seed %d: joint graph has %d components, cross-component pairs are infinite",
                       seed, stats.component_count)

    labels = [f"c{i}" for i in range(data.n)]
    signals = normalize_signals(data.membership_signals(), labels)
    upper = np.triu_indices(data.n, k=1)
    geodesics = data.geodesics[upper]

    engines = [EngineSpec.exact()] if config.include_exact else []
    engines += [EngineSpec.chebyshev(order) for order in config.orders]

    results: Dict[str, SeedResult] = {}
    scatter: List[tuple] = []
    for engine in engines:
        start = time.perf_counter()
        E = metric.embed(signals, engine)
        embedded = time.perf_counter()
        D = pairwise_distances(E, metric.mass_gaps(signals), metric.mass_tolerance, threads=1)
        finished = time.perf_counter()
        nearest_distributions(D, config.nearest_k)
        queried = time.perf_counter()

        name = engine.label()
        distances = D.upper_triangle()
        results[name] = SeedResult(
            seed=seed,
            rho=_rank_correlation(name, seed, distances, geodesics),
            embedding_seconds=embedded - start,
            all_pairs_seconds=finished - start,
            nearest_seconds=queried - finished,
        )
        scatter.extend(zip([name] * len(distances), [seed] * len(distances), upper[0], upper[1], geodesics, distances))

    if config.include_baseline:
        start = time.perf_counter()
        values = _baseline_matrix(data, config)
        finished = time.perf_counter()
        baseline = DistanceMatrix(values, labels)
        nearest_distributions(baseline, config.nearest_k)
        queried = time.perf_counter()
        distances = baseline.upper_triangle()
        results[KERNEL_MMD] = SeedResult(
            seed=seed,
            rho=_rank_correlation(KERNEL_MMD, seed, distances, geodesics),
            all_pairs_seconds=finished - start,
            nearest_seconds=queried - finished,
        )
        scatter.extend(zip([KERNEL_MMD] * len(distances), [seed] * len(distances), upper[0], upper[1],
                           geodesics, distances))

    logger.info("Seed %d done: %s", seed, ", ".join(f"{k} rho={_format_rho(v.rho)}" for k, v in results.items()))
    return stats, results, scatter


def run_swissroll_benchmark(config: Optional[SwissRollConfig] = None, threads: Optional[int] = None) -> BenchmarkReport:
    """
    Swiss-roll distribution-distance benchmark

    Per seed: one affinity graph on all ``n·m`` points, each cloud turned into
    the uniform distribution over its own vertices, all-pairs GFMMD on every
    enabled path and the kernel-MMD baseline, each scored by Spearman-ρ of the
    upper triangle against the geodesic matrix. Seeds run in parallel; methods
    within a seed run one after another.

    Args:
        config: Benchmark configuration (defaults when omitted)
        threads: Worker cap for the seed pool

    Returns:
        Report with per-seed values and mean ± sd per method; the scatter
        pairs are available as ``report.scatter``
    """
    config = config or SwissRollConfig()
    logger.info("Swiss roll benchmark: n=%d, m=%d, seeds=%s", config.n, config.m, config.seeds)
    runs = map_blocks(lambda seed: _run_seed(config, seed), config.seeds, threads)

    methods = []
    for name in runs[0][1]:
        per_seed = [results[name] for _, results, _ in runs]
        rhos = np.array([r.rho for r in per_seed if r.rho is not None])
        if rhos.size < len(per_seed):
            logger.warning("%s: rho undefined on %d of %d seeds", name, len(per_seed) - rhos.size, len(per_seed))
        methods.append(MethodResult(
            method=name,
            per_seed=per_seed,
            rho_mean=float(np.clip(rhos.mean(), -1.0, 1.0)) if rhos.size else None,
            rho_std=(float(rhos.std(ddof=1)) if rhos.size > 1 else 0.0) if rhos.size else None,
        ))

    report = BenchmarkReport(run_id=config_run_id(config), config=config,
                             graphs=[stats for stats, _, _ in runs], methods=methods)
    scatter = pd.DataFrame([row for _, _, rows in runs for row in rows], columns=SCATTER_COLUMNS)
    return report.with_scatter(scatter)


# Grid

def run_grid_experiment(config: Optional[GridConfig] = None, threads: Optional[int] = None) -> GridReport:
    """
    Translated heat bumps on a grid

    P is the heat-diffused Dirac at ``config.center``; Q_j is the same bump
    moved ``j·shift_step`` columns to the right. Reports GFMMD(P, Q_j), the
    witness for each nonzero shift, and the localization of ½(P + Q_j) under
    both the e^{-τλ} and the e^{-τλ/λ_max} diffusion conventions.
    """
    config = config or GridConfig()
    start = time.perf_counter()
    metric = GraphFourierMMD(grid_graph(config.rows, config.cols), engine=config.engine, threads=threads)
    row, col = config.center
    offsets = [config.shift_step * j for j in range(config.shifts)]

    if config.engine.kind == EngineKind.EXACT:
        lambda_max = metric.spectral.decomposition.lambda_max
    else:
        lambda_max = metric.spectral.lambda_max_estimate

    def bumps(tau: float) -> Tuple[np.ndarray, List[np.ndarray]]:
        P = metric.heat_diffuse_dirac(config.vertex(row, col), tau)
        return P, [metric.heat_diffuse_dirac(config.vertex(row, col + o), tau) for o in offsets]

    P, shifted = bumps(config.tau)
    distances = [metric.gfmmd(P, Q) for Q in shifted]

    witnesses: List[Optional[List[float]]] = []
    gaps: List[Optional[float]] = []
    for Q in shifted:
        if np.array_equal(P, Q):
            witnesses.append(None)
            gaps.append(None)
            continue
        f = metric.witness_function(P, Q)
        witnesses.append(f.tolist())
        gaps.append(float((P - Q) @ f))

    scores = [metric.localization_score(0.5 * (P + Q)) for Q in shifted]
    P_norm, shifted_norm = bumps(config.tau / lambda_max)
    normalized = [metric.localization_score(0.5 * (P_norm + Q)) for Q in shifted_norm]

    reference = REFERENCE_BIMODAL_SCORES[:len(offsets)]

    def deviation(values: List[float]) -> List[float]:
        return [abs(v - r) / r for v, r in zip(values, reference)]

    report = GridReport(
        run_id=config_run_id(config),
        config=config,
        offsets=offsets,
        distances=distances,
        distances_increasing=_is_monotone(distances, increasing=True, strict=True),
        witness_gaps=gaps,
        witnesses=witnesses,
        bimodal_scores=scores,
        bimodal_nonincreasing=_is_monotone(scores, increasing=False, strict=False),
        reference_scores=reference,
        relative_deviation=deviation(scores),
        normalized_bimodal_scores=normalized,
        normalized_relative_deviation=deviation(normalized),
        seconds=time.perf_counter() - start,
    )
    logger.info("Grid experiment: distances=%s, bimodal=%s",
                np.round(distances, 4).tolist(), np.round(scores, 4).tolist())
    return report


# Localization

def run_localization_suite(config: Optional[LocalizationConfig] = None,
                           threads: Optional[int] = None) -> LocalizationReport:
    """
    Localization of a Dirac under growing diffusion and of growing hop balls

    Both sequences should decrease: diffusion spreads the mass, and a larger
    ball is closer to uniform.
    """
    config = config or LocalizationConfig()
    start = time.perf_counter()
    graph = read_edge_list(config.edges) if config.edges else grid_graph(config.rows, config.cols)
    center = config.resolved_center()
    if center >= graph.n:
        raise InvalidInputError(f"Center vertex {center} outside [0, {graph.n})")
    metric = GraphFourierMMD(graph, engine=config.engine, threads=threads)

    diffusion = [metric.localization_score(metric.heat_diffuse_dirac(center, tau)) for tau in config.taus]
    balls = [hop_distribution(graph, center, hops) for hops in config.hops]
    hop_scores = [metric.localization_score(ball) for ball in balls]

    return LocalizationReport(
        run_id=config_run_id(config),
        config=config,
        center=center,
        diffusion_scores=diffusion,
        diffusion_decreasing=_is_monotone(diffusion, increasing=False, strict=True),
        hop_sizes=[int(np.count_nonzero(ball)) for ball in balls],
        hop_scores=hop_scores,
        hop_nonincreasing=_is_monotone(hop_scores, increasing=False, strict=False),
        seconds=time.perf_counter() - start,
    )


# Report output

def write_report_json(report: BaseReport, path: PathLike) -> None:
    Path(path).write_text(report.model_dump_json(indent=2) + "\n")


def format_report_text(report: BaseReport) -> str:
    """Aligned-column summary of a report"""
    if isinstance(report, BenchmarkReport):
        frame = pd.DataFrame({
            "method": [m.method for m in report.methods],
            "rho_mean": [m.rho_mean for m in report.methods],
            "rho_std": [m.rho_std for m in report.methods],
            "all_pairs_s": [np.mean([s.all_pairs_seconds for s in m.per_seed]) for m in report.methods],
            "nearest_s": [np.mean([s.nearest_seconds for s in m.per_seed]) for m in report.methods],
        })
        title = f"swiss roll n={report.config.n} m={report.config.m} seeds={report.config.seeds}"
    elif isinstance(report, GridReport):
        frame = pd.DataFrame({
            "offset": report.offsets,
            "gfmmd": report.distances,
            "bimodal": report.bimodal_scores,
            "reference": report.reference_scores,
            "bimodal_norm": report.normalized_bimodal_scores,
        })
        title = (f"grid {report.config.rows}x{report.config.cols} tau={report.config.tau} "
                 f"increasing={report.distances_increasing} nonincreasing={report.bimodal_nonincreasing}")
    elif isinstance(report, LocalizationReport):
        steps = max(len(report.config.taus), len(report.config.hops))

        def padded(values):
            return list(values) + [None] * (steps - len(values))

        frame = pd.DataFrame({
            "tau": padded(report.config.taus),
            "diffusion": padded(report.diffusion_scores),
            "hops": padded(report.config.hops),
            "ball_size": padded(report.hop_sizes),
            "hop_score": padded(report.hop_scores),
        })
        title = (f"localization center={report.center} diffusion_decreasing={report.diffusion_decreasing} "
                 f"hop_nonincreasing={report.hop_nonincreasing}")
    else:
        raise InvalidInputError(f"Unsupported report type {type(report).__name__}")
    return title + "\n" + frame.to_string(index=False) + "\n"


def write_report_text(report: BaseReport, path: PathLike) -> None:
    Path(path).write_text(format_report_text(report))


def write_scatter_csv(report: BenchmarkReport, path: PathLike) -> None:
    """``method,seed,i,j,geodesic,distance`` rows for external plotting"""
    frame = report.scatter if report.scatter is not None else pd.DataFrame(columns=SCATTER_COLUMNS)
    frame.to_csv(path, index=False)
