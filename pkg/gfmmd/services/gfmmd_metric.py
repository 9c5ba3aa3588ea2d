"""
Graph Fourier MMD.

GFMMD(P, Q) = ‖L^{-1/2}(P - Q)‖₂ when P and Q put equal mass on every
connected component, +∞ otherwise. The feature map behind it (component
centering followed by the inverse-square-root filter) gives embeddings whose
Euclidean distances are GFMMD, localization scores, witness functions and
effective resistances.
"""

import logging
from itertools import chain
from typing import Optional, Sequence, Tuple

import numpy as np
from sklearn.decomposition import PCA

from gfmmd.core.config import settings
from gfmmd.core.exceptions import (
    CouplingError,
    DimensionMismatchError,
    InvalidGraphError,
    InvalidInputError,
    SignalValidationError,
    UndefinedWitnessError,
)
from gfmmd.core.parallel import map_blocks, row_pairs_blocks
from gfmmd.models.graph import ComponentLabeling, Graph
from gfmmd.models.signals import DistanceMatrix, EmbeddingMatrix, SignalMatrix, default_labels
from gfmmd.schemas.common import EngineKind
from gfmmd.schemas.spectral import EngineSpec, FilterSpec
from gfmmd.services.graph_builder import connected_components, laplacian
from gfmmd.services.spectral_engine import SpectralEngine

logger = logging.getLogger(__name__)

INVERSE_SQRT = FilterSpec.inverse_sqrt()
INVERSE = FilterSpec.inverse()


def normalize_signals(raw, labels: Optional[Sequence[str]] = None) -> SignalMatrix:
    """
    Divide every column by its sum

    Args:
        raw: ``n × m`` nonnegative matrix or an unnormalized SignalMatrix
        labels: Column labels (taken from ``raw`` when it is a SignalMatrix)

    Returns:
        Column-stochastic SignalMatrix

    Raises:
        SignalValidationError: On negative or non-finite entries, or an all-zero column
    """
    if isinstance(raw, SignalMatrix):
        labels = raw.labels if labels is None else labels
        values = raw.values
    else:
        values = np.asarray(raw, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
    labels = list(labels) if labels is not None else default_labels(values.shape[1])

    for j, label in enumerate(labels):
        column = values[:, j]
        if not np.all(np.isfinite(column)):
            raise SignalValidationError(f"Signal '{label}' has non-finite entries", details={"label": label})
        if np.any(column < 0):
            raise SignalValidationError(f"Signal '{label}' has negative entries", details={"label": label})
        if column.sum() <= 0:
            raise SignalValidationError(f"Signal '{label}' sums to zero", details={"label": label})

    return SignalMatrix(values / values.sum(axis=0), labels, normalized=True)


def component_mass_gap(P: np.ndarray, Q: np.ndarray, comp: ComponentLabeling) -> float:
    """max over components S of |Σ_S (P - Q)|"""
    masses = comp.masses(np.asarray(P, dtype=float) - np.asarray(Q, dtype=float))
    return float(np.max(np.abs(masses))) if masses.size else 0.0


def mass_gap_matrix(values: np.ndarray, comp: ComponentLabeling) -> np.ndarray:
    """``m × m`` matrix of component mass gaps between all columns"""
    masses = comp.masses(values)
    return np.max(np.abs(masses[:, :, None] - masses[:, None, :]), axis=0)


def pairwise_distances(E: EmbeddingMatrix, mass_gaps: Optional[np.ndarray] = None,
                       mass_tolerance: Optional[float] = None, threads: Optional[int] = None) -> DistanceMatrix:
    """
    All Euclidean distances between embedding rows

    Args:
        E: Embedding
        mass_gaps: Optional ``m × m`` component mass gaps; entries above the
                   tolerance become +∞
        mass_tolerance: Equal-component-mass tolerance
        threads: Worker cap

    Returns:
        Symmetric distance matrix with zero diagonal
    """
    tol = settings.mass_tolerance if mass_tolerance is None else mass_tolerance
    X = E.vectors
    m = X.shape[0]

    def rows(block: range):
        return [np.linalg.norm(X[i + 1:] - X[i], axis=1) for i in block]

    values = np.zeros((m, m))
    for i, d in enumerate(chain.from_iterable(map_blocks(rows, row_pairs_blocks(m, threads), threads))):
        values[i, i + 1:] = d
        values[i + 1:, i] = d

    if mass_gaps is not None:
        if mass_gaps.shape != (m, m):
            raise DimensionMismatchError(f"mass gaps have shape {mass_gaps.shape}, expected {(m, m)}")
        values[mass_gaps > tol] = np.inf
        np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values, E.labels)


def nearest_distributions(D: DistanceMatrix, k: int) -> np.ndarray:
    """
    Indices of the ``k`` nearest other signals for every signal

    Ties are broken by the lower index.
    """
    if not 1 <= k < D.m:
        raise InvalidInputError(f"k must satisfy 1 <= k < {D.m}, got {k}")
    result = np.empty((D.m, k), dtype=int)
    for i in range(D.m):
        order = np.argsort(D.values[i], kind="stable")
        result[i] = order[order != i][:k]
    return result


def embedding_principal_components(E: EmbeddingMatrix, k: int) -> np.ndarray:
    """Coordinates of the embedding rows on its top ``k`` principal axes"""
    return PCA(n_components=k, svd_solver="full").fit_transform(E.vectors)


class GraphFourierMMD:
    """Graph Fourier MMD on a fixed graph"""

    def __init__(self, graph: Graph, engine: Optional[EngineSpec] = None, mass_tolerance: Optional[float] = None,
                 rank_tolerance: Optional[float] = None, threads: Optional[int] = None):
        self.graph = graph
        self.engine = engine or EngineSpec.exact()
        self.mass_tolerance = settings.mass_tolerance if mass_tolerance is None else mass_tolerance
        self.threads = threads
        self.laplacian = laplacian(graph)
        self.components = connected_components(graph)
        self.spectral = SpectralEngine(self.laplacian, self.engine, rank_tolerance, threads)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def is_connected(self) -> bool:
        return self.components.count == 1

    def provenance(self, engine: Optional[EngineSpec] = None) -> str:
        engine = engine or self.engine
        if engine.kind == EngineKind.EXACT:
            return "exact"
        order = engine.order or settings.chebyshev_order
        return f"chebyshev(order={order}, eps={self.spectral.epsilon_for(engine)!r})"

    def feature_map(self, values: np.ndarray, engine: Optional[EngineSpec] = None) -> np.ndarray:
        """
        L^{-1/2} applied to per-component centered columns

        The output is centered again so it is orthogonal to every component
        indicator on both paths.
        """
        centered = self.components.center(self._check_rows(values))
        filtered = self.spectral.apply(INVERSE_SQRT, centered, engine)
        return self.components.center(filtered)

    def embed(self, signals: SignalMatrix, engine: Optional[EngineSpec] = None) -> EmbeddingMatrix:
        """
        Feature vectors E_i = L^{-1/2} f_i, one row per signal

        Raises:
            SignalValidationError: If ``signals`` are not normalized
        """
        if not signals.normalized:
            raise SignalValidationError("embed expects normalized signals; use normalize_signals first")
        vectors = self.feature_map(signals.values, engine).T
        return EmbeddingMatrix(vectors=vectors, labels=signals.labels, provenance=self.provenance(engine))

    def component_mass_gap(self, P: np.ndarray, Q: np.ndarray) -> float:
        return component_mass_gap(self._check_rows(P), self._check_rows(Q), self.components)

    def gfmmd(self, P: np.ndarray, Q: np.ndarray, engine: Optional[EngineSpec] = None) -> float:
        """
        GFMMD between two distributions

        Returns:
            ‖L^{-1/2}(P - Q)‖₂, or +∞ when the component masses differ
        """
        if self.component_mass_gap(P, Q) > self.mass_tolerance:
            return float("inf")
        d = np.asarray(P, dtype=float) - np.asarray(Q, dtype=float)
        if not np.any(d):
            return 0.0
        return float(np.linalg.norm(self.feature_map(d, engine)))

    def signal_seminorm_distance(self, f: np.ndarray, g: np.ndarray, engine: Optional[EngineSpec] = None) -> float:
        """
        ‖L^{-1/2}(f - g)‖₂ for arbitrary signals

        No normalization and no +∞ rule: the component means of ``f - g`` lie in
        ker(L) and do not contribute.
        """
        d = np.asarray(f, dtype=float) - np.asarray(g, dtype=float)
        return float(np.linalg.norm(self.feature_map(d, engine)))

    def spectral_gfmmd(self, P: np.ndarray, Q: np.ndarray) -> float:
        """
        GFMMD from graph Fourier coefficients

        sqrt(Σ_{λ_i ≠ 0} (P̂(i) - Q̂(i))² / λ_i) on the exact decomposition.
        """
        if self.component_mass_gap(P, Q) > self.mass_tolerance:
            return float("inf")
        dec = self.spectral.decomposition
        diff = dec.transform(np.asarray(P, dtype=float) - np.asarray(Q, dtype=float))
        nonzero = ~dec.zero_mask
        return float(np.sqrt(np.sum(diff[nonzero] ** 2 / dec.eigenvalues[nonzero])))

    def mass_gaps(self, signals: SignalMatrix) -> np.ndarray:
        return mass_gap_matrix(signals.values, self.components)

    def distance_matrix(self, signals: SignalMatrix,
                        engine: Optional[EngineSpec] = None) -> Tuple[DistanceMatrix, EmbeddingMatrix]:
        """Embed ``signals`` and compute all pairwise GFMMDs"""
        E = self.embed(signals, engine)
        D = pairwise_distances(E, self.mass_gaps(signals), self.mass_tolerance, self.threads)
        logger.info("Computed %d×%d GFMMD matrix (%s)", D.m, D.m, E.provenance)
        return D, E

    def localization_scores(self, signals: SignalMatrix, engine: Optional[EngineSpec] = None) -> np.ndarray:
        """
        GFMMD of every column to the uniform distribution

        Columns whose component masses differ from the uniform's score +∞.
        """
        values = self._check_rows(signals.values)
        uniform_mass = self.components.sizes / self.n
        gaps = np.max(np.abs(self.components.masses(values) - uniform_mass[:, None]), axis=0)
        scores = np.linalg.norm(self.feature_map(values, engine), axis=0)
        return np.where(gaps > self.mass_tolerance, np.inf, scores)

    def localization_score(self, P: np.ndarray, engine: Optional[EngineSpec] = None) -> float:
        """s(P) = GFMMD(P, U) = ‖L^{-1/2} P‖₂ after centering"""
        signals = SignalMatrix(self._check_rows(P), ["P"], normalized=True)
        return float(self.localization_scores(signals, engine)[0])

    def witness_function(self, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
        """
        Optimal witness f* = L^†(P - Q) / GFMMD(P, Q) on the exact path

        f* has unit smoothness f*ᵀLf* = 1 and attains (P - Q)ᵀf* = GFMMD(P, Q).

        Raises:
            UndefinedWitnessError: For identical distributions or an infinite distance
        """
        d = self._check_rows(np.asarray(P, dtype=float) - np.asarray(Q, dtype=float))
        if component_mass_gap(d, np.zeros_like(d), self.components) > self.mass_tolerance:
            raise UndefinedWitnessError("Witness undefined: the distributions have unequal component mass")
        exact = EngineSpec.exact()
        centered = self.components.center(d)
        distance = float(np.linalg.norm(self.spectral.apply(INVERSE_SQRT, centered, exact)))
        if distance == 0.0 or not np.any(d):
            raise UndefinedWitnessError("Witness undefined: the two distributions are identical")
        return self.spectral.apply(INVERSE, centered, exact) / distance

    def effective_resistance(self, a: int, b: int, engine: Optional[EngineSpec] = None) -> float:
        """
        Effective resistance Re(a, b) = ‖L^{-1/2}δ_a - L^{-1/2}δ_b‖₂²

        +∞ between different components.
        """
        self._check_vertex(a)
        self._check_vertex(b)
        if a == b:
            return 0.0
        if self.components.labels[a] != self.components.labels[b]:
            return float("inf")
        d = np.zeros(self.n)
        d[a], d[b] = 1.0, -1.0
        return float(np.sum(self.feature_map(d, engine or EngineSpec.exact()) ** 2))

    def resistance_matrix(self) -> np.ndarray:
        """Dense matrix of all effective resistances (exact path)"""
        pinv = self.spectral.decomposition.pseudoinverse()
        diag = np.diag(pinv)
        R = diag[:, None] + diag[None, :] - 2.0 * pinv
        R = np.maximum(R, 0.0)
        labels = self.components.labels
        R[labels[:, None] != labels[None, :]] = np.inf
        np.fill_diagonal(R, 0.0)
        return R

    def coupling_bound_check(self, P: np.ndarray, Q: np.ndarray, coupling: np.ndarray,
                             tolerance: float = 1e-9) -> Tuple[float, float]:
        """
        Both sides of GFMMD(P, Q)² <= E_{(X,Y)~π}[Re(X, Y)]

        Args:
            P, Q: Distributions
            coupling: ``n × n`` joint distribution with marginals P (rows) and Q (columns)
            tolerance: Marginal tolerance

        Returns:
            ``(GFMMD², expected resistance)``

        Raises:
            CouplingError: If the coupling is negative or has the wrong marginals
        """
        P = self._check_rows(P)
        Q = self._check_rows(Q)
        coupling = np.asarray(coupling, dtype=float)
        if coupling.shape != (self.n, self.n):
            raise CouplingError(f"Coupling must be {self.n}×{self.n}, got {coupling.shape}")
        if np.any(coupling < 0):
            raise CouplingError("Coupling has negative entries")
        row_error = float(np.max(np.abs(coupling.sum(axis=1) - P)))
        col_error = float(np.max(np.abs(coupling.sum(axis=0) - Q)))
        if row_error > tolerance or col_error > tolerance:
            raise CouplingError(
                "Coupling marginals do not match P and Q",
                details={"row_error": row_error, "column_error": col_error},
            )

        R = self.resistance_matrix()
        support = coupling > 0
        rhs = float(np.sum(coupling[support] * R[support]))
        lhs = self.gfmmd(P, Q, EngineSpec.exact()) ** 2
        return lhs, rhs

    def fiedler_bound_check(self, P: np.ndarray, Q: np.ndarray, agreement_tol: float = 1e-12) -> Tuple[float, float]:
        """
        GFMMD(P, Q) and the bound sqrt(2(1 - p) / λ₂)

        ``p`` is the mass of P on the vertices where P and Q agree.

        Raises:
            InvalidGraphError: On a disconnected graph
        """
        if not self.is_connected:
            raise InvalidGraphError("Fiedler bound requires a connected graph")
        P = self._check_rows(P)
        Q = self._check_rows(Q)
        p = float(P[np.abs(P - Q) <= agreement_tol].sum())
        fiedler = self.spectral.decomposition.fiedler_value
        bound = float(np.sqrt(max(0.0, 2.0 * (1.0 - p)) / fiedler))
        return self.gfmmd(P, Q, EngineSpec.exact()), bound

    def heat_diffuse_dirac(self, v: int, tau: float, engine: Optional[EngineSpec] = None) -> np.ndarray:
        """
        e^{-τL}δ_v clamped at zero and renormalized to sum 1
        """
        self._check_vertex(v)
        if not tau > 0:
            raise InvalidInputError(f"Diffusion time must be positive, got {tau}")
        delta = np.zeros(self.n)
        delta[v] = 1.0
        diffused = self.spectral.apply(FilterSpec.heat(tau), delta, engine)
        negative = diffused < 0
        if negative.any():
            logger.debug("Clamped %d negative heat values (min %.3g)", int(negative.sum()), float(diffused.min()))
            diffused = np.where(negative, 0.0, diffused)
        return diffused / diffused.sum()

    def filtered_distance_matrix(self, signals: SignalMatrix, h: FilterSpec,
                                 engine: Optional[EngineSpec] = None) -> DistanceMatrix:
        """Euclidean distances between h(L)-filtered signals (no centering, no +∞ rule)"""
        filtered = self.spectral.apply(h, self._check_rows(signals.values), engine)
        E = EmbeddingMatrix(vectors=filtered.T, labels=signals.labels, provenance=h.label())
        return pairwise_distances(E, threads=self.threads)

    def _check_rows(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.n:
            raise DimensionMismatchError(
                f"Signal has {values.shape[0]} entries but the graph has {self.n} vertices",
                details={"signal_rows": int(values.shape[0]), "graph_vertices": self.n},
            )
        return values

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n:
            raise InvalidInputError(f"Vertex {v} outside [0, {self.n})")
