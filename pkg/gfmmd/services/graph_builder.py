"""
Graph construction and interrogation.

k-NN affinity graphs from point clouds, synthetic lattices and paths, the
combinatorial Laplacian, connected components and hop neighborhoods.
"""

import logging
from typing import Iterable, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as cs_components, shortest_path
from sklearn.neighbors import NearestNeighbors

from gfmmd.core.exceptions import InvalidGraphError, InvalidInputError
from gfmmd.models.graph import ComponentLabeling, Graph, LaplacianMatrix
from gfmmd.schemas.common import KernelVariant
from gfmmd.schemas.graph import GraphStats, KernelSpec

logger = logging.getLogger(__name__)


def graph_from_edges(n: int, edges: Iterable[Tuple[int, int, float]]) -> Graph:
    """
    Build a graph from undirected edges listed once

    Args:
        n: Vertex count
        edges: ``(a, b, weight)`` triples, 0-indexed

    Returns:
        Symmetric graph; repeated edges have their weights summed

    Raises:
        InvalidGraphError: On out-of-range vertices, self-loops or negative weights
    """
    edges = list(edges)
    if not edges:
        return Graph(sp.csr_matrix((n, n)))
    a, b, w = (np.asarray(col) for col in zip(*edges))
    a = a.astype(int)
    b = b.astype(int)
    w = w.astype(float)
    if a.min() < 0 or b.min() < 0 or max(a.max(), b.max()) >= n:
        raise InvalidGraphError(f"Edge endpoint outside [0, {n})")
    if np.any(a == b):
        raise InvalidGraphError(f"Self-loop at vertex {int(a[a == b][0])}")
    if np.any(w < 0):
        raise InvalidGraphError("Edge weights must be nonnegative")
    rows = np.concatenate([a, b])
    cols = np.concatenate([b, a])
    return Graph(sp.coo_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n)).tocsr())


def build_knn_graph(points: np.ndarray, k_nn: int, kernel: KernelSpec) -> Graph:
    """
    Union-symmetrized k-nearest-neighbor affinity graph

    Each point is linked to its ``k_nn`` nearest other points (exact search);
    an edge exists when either endpoint selected the other. Weights are the
    kernel value of the Euclidean distance.

    Args:
        points: ``n × d`` coordinates
        k_nn: Neighbors per point, ``1 <= k_nn < n``
        kernel: Fixed or adaptive gaussian kernel

    Returns:
        Affinity graph with at most ``n·k_nn`` undirected edges

    Raises:
        InvalidInputError: On non-finite coordinates or an invalid ``k_nn``
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise InvalidInputError(f"Points must be an n×d matrix, got shape {points.shape}")
    n = points.shape[0]
    if n < 2:
        raise InvalidInputError(f"Need at least 2 points, got {n}")
    if not 1 <= k_nn < n:
        raise InvalidInputError(f"k_nn must satisfy 1 <= k_nn < n={n}, got {k_nn}")
    if not np.all(np.isfinite(points)):
        bad = int(np.flatnonzero(~np.all(np.isfinite(points), axis=1))[0])
        raise InvalidInputError(f"Non-finite coordinate in point {bad}", details={"point": bad})

    k_search = k_nn
    if kernel.variant == KernelVariant.ADAPTIVE_GAUSSIAN:
        k_search = max(k_nn, min(kernel.k_bw, n - 1))

    nbrs = NearestNeighbors(n_neighbors=k_search, algorithm="brute").fit(points)
    neighbor_distances, neighbor_index = nbrs.kneighbors()

    rows = np.repeat(np.arange(n), k_nn)
    cols = neighbor_index[:, :k_nn].ravel()
    pairs = np.unique(np.sort(np.column_stack([rows, cols]), axis=1), axis=0)
    a, b = pairs[:, 0], pairs[:, 1]
    distances = np.linalg.norm(points[a] - points[b], axis=1)

    if kernel.variant == KernelVariant.ADAPTIVE_GAUSSIAN:
        bandwidth = neighbor_distances[:, min(kernel.k_bw, n - 1) - 1]
        weights = kernel.weights(distances, bandwidth[a], bandwidth[b])
    else:
        weights = kernel.weights(distances)

    graph = graph_from_edges(n, zip(a, b, weights))
    logger.info("Built %d-NN graph: n=%d, edges=%d, kernel=%s", k_nn, n, graph.edge_count, kernel.label())
    return graph


def laplacian(g: Graph) -> LaplacianMatrix:
    """Combinatorial Laplacian L = D - A"""
    degrees = g.degrees
    matrix = (sp.diags(degrees) - g.adjacency).tocsr()
    matrix.sort_indices()
    return LaplacianMatrix(matrix=matrix, degrees=degrees)


def connected_components(g: Graph) -> ComponentLabeling:
    """
    Connected components with deterministic labels

    The component containing the lowest vertex index gets label 0, the
    next unseen lowest vertex opens label 1, and so on.
    """
    count, raw = cs_components(g.adjacency, directed=False)
    _, first_seen = np.unique(raw, return_index=True)
    order = np.argsort(first_seen)
    relabel = np.empty(count, dtype=int)
    relabel[order] = np.arange(count)
    return ComponentLabeling(labels=relabel[raw], count=int(count))


def grid_graph(rows: int, cols: int) -> Graph:
    """4-neighbor lattice with unit weights, vertex (i, j) at index i·cols + j"""
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"Grid dimensions must be positive, got {rows}×{cols}")
    index = np.arange(rows * cols).reshape(rows, cols)
    horizontal = np.column_stack([index[:, :-1].ravel(), index[:, 1:].ravel()])
    vertical = np.column_stack([index[:-1, :].ravel(), index[1:, :].ravel()])
    pairs = np.vstack([horizontal, vertical])
    return graph_from_edges(rows * cols, ((int(a), int(b), 1.0) for a, b in pairs))


def path_graph(n: int, weight: float = 1.0) -> Graph:
    """Path 0 - 1 - ... - (n-1)"""
    if n < 1:
        raise InvalidInputError(f"Path needs at least one vertex, got {n}")
    return graph_from_edges(n, ((i, i + 1, weight) for i in range(n - 1)))


def hop_counts(g: Graph, v: int) -> np.ndarray:
    """Unweighted shortest-path hop count from ``v`` (``inf`` when unreachable)"""
    _check_vertex(g, v)
    return shortest_path(g.adjacency, directed=False, unweighted=True, indices=v)


def hop_distribution(g: Graph, v: int, hops: int) -> np.ndarray:
    """
    Uniform distribution over the vertices within ``hops`` hops of ``v``

    Args:
        g: Graph
        v: Center vertex
        hops: Radius, ``hops >= 0``

    Returns:
        Probability vector of length ``n``
    """
    if hops < 0:
        raise InvalidInputError(f"hops must be nonnegative, got {hops}")
    ball = hop_counts(g, v) <= hops
    return ball / ball.sum()


def graph_stats(g: Graph, components: Optional[ComponentLabeling] = None) -> GraphStats:
    if components is None:
        components = connected_components(g)
    degrees = g.degrees
    return GraphStats(
        n=g.n,
        edge_count=g.edge_count,
        component_count=components.count,
        min_degree=float(degrees.min()) if g.n else 0.0,
        max_degree=float(degrees.max()) if g.n else 0.0,
        total_weight=float(g.adjacency.sum() / 2),
    )


def _check_vertex(g: Graph, v: int):
    if not 0 <= v < g.n:
        raise InvalidInputError(f"Vertex {v} outside [0, {g.n})")
