from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

import numpy as np
import scipy.sparse as sp

from gfmmd.core.exceptions import InvalidGraphError


@dataclass(frozen=True)
class Graph:
    """
    Sparse undirected graph with nonnegative weights

    The adjacency matrix is stored in canonical CSR form and is exactly
    symmetric. Instances are immutable and safe to share between threads.
    """

    adjacency: sp.csr_matrix
    directed: bool = field(default=False, init=False)

    def __post_init__(self):
        adjacency = sp.csr_matrix(self.adjacency, dtype=float)
        adjacency.eliminate_zeros()
        adjacency.sum_duplicates()
        adjacency.sort_indices()

        if adjacency.shape[0] != adjacency.shape[1]:
            raise InvalidGraphError(f"Adjacency must be square, got shape {adjacency.shape}")
        if adjacency.nnz and not np.all(np.isfinite(adjacency.data)):
            raise InvalidGraphError("Edge weights must be finite")
        if adjacency.nnz and adjacency.data.min() < 0:
            raise InvalidGraphError("Edge weights must be nonnegative")
        if np.any(adjacency.diagonal() != 0):
            raise InvalidGraphError("Self-loops are not allowed")
        if (adjacency != adjacency.T).nnz:
            raise InvalidGraphError("Adjacency must be symmetric")

        object.__setattr__(self, "adjacency", adjacency)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def edge_count(self) -> int:
        return self.adjacency.nnz // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        """Undirected edges ``(a, b, weight)`` with ``a < b`` in canonical order"""
        upper = sp.triu(self.adjacency, k=1).tocsr()
        upper.sort_indices()
        for a in range(self.n):
            start, stop = upper.indptr[a], upper.indptr[a + 1]
            for b, w in zip(upper.indices[start:stop], upper.data[start:stop]):
                yield a, int(b), float(w)

    def neighbors(self, v: int) -> np.ndarray:
        start, stop = self.adjacency.indptr[v], self.adjacency.indptr[v + 1]
        return self.adjacency.indices[start:stop]

    def scaled(self, c: float) -> "Graph":
        """Same graph with every weight multiplied by ``c > 0``"""
        if not c > 0:
            raise InvalidGraphError(f"Scale factor must be positive, got {c}")
        return Graph(self.adjacency * c)

    def permuted(self, order: np.ndarray) -> "Graph":
        """Graph whose vertex ``i`` is vertex ``order[i]`` of this graph"""
        order = np.asarray(order)
        return Graph(self.adjacency[order][:, order])

    def subgraph(self, vertices: np.ndarray) -> "Graph":
        vertices = np.asarray(vertices)
        return Graph(self.adjacency[vertices][:, vertices])


@dataclass(frozen=True)
class LaplacianMatrix:
    """Combinatorial Laplacian L = D - A with its degree vector"""

    matrix: sp.csr_matrix
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def quadratic_form(self, f: np.ndarray) -> float:
        """fᵀLf"""
        f = np.asarray(f, dtype=float)
        return float(f @ (self.matrix @ f))

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class ComponentLabeling:
    """Connected-component label per vertex, labels in ``[0, count)``"""

    labels: np.ndarray
    count: int

    @property
    def members(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.labels == c) for c in range(self.count)]

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)

    def indicator(self) -> sp.csr_matrix:
        """``count × n`` matrix whose rows are the component indicators"""
        n = self.labels.shape[0]
        return sp.csr_matrix((np.ones(n), (self.labels, np.arange(n))), shape=(self.count, n))

    def masses(self, signals: np.ndarray) -> np.ndarray:
        """Total signal per component, ``count × m`` (or ``count`` for a single column)"""
        return self.indicator() @ np.asarray(signals, dtype=float)

    def center(self, signals: np.ndarray) -> np.ndarray:
        """Subtract the per-component mean of every column"""
        signals = np.asarray(signals, dtype=float)
        sizes = self.sizes.astype(float)
        means = self.masses(signals)
        if signals.ndim == 1:
            return signals - (means / sizes)[self.labels]
        return signals - (means / sizes[:, None])[self.labels]

    def same_partition(self, other: "ComponentLabeling") -> bool:
        """Partition equality, ignoring how the labels are numbered"""
        if self.count != other.count or self.labels.shape != other.labels.shape:
            return False
        pairs = set(zip(self.labels.tolist(), other.labels.tolist()))
        return len(pairs) == self.count
