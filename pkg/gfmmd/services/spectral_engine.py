"""
Spectral filter application.

Two interchangeable paths compute h(L)·S for a block of signal columns S:

- exact: dense eigendecomposition, h applied to the clamped spectrum with the
  pseudoinverse convention for inverse filters;
- chebyshev: h fitted by a Chebyshev expansion on [0, λ̂] and applied through
  the three-term recurrence using only sparse products with L.
"""

import logging
import threading
from functools import cached_property
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from numpy.polynomial import chebyshev as C

from gfmmd.core.config import settings
from gfmmd.core.exceptions import (
    CapacityError,
    DimensionMismatchError,
    FilterDomainError,
    IntervalError,
    InvalidInputError,
)
from gfmmd.core.parallel import column_blocks, map_blocks
from gfmmd.core.seeding import POWER_ITERATION_STREAM, make_rng
from gfmmd.models.graph import LaplacianMatrix
from gfmmd.models.spectral import ChebyshevFilter, SpectralDecomposition
from gfmmd.schemas.common import EngineKind
from gfmmd.schemas.spectral import EngineSpec, FilterSpec

logger = logging.getLogger(__name__)


def eigendecompose(L: LaplacianMatrix, rank_tolerance: Optional[float] = None,
                   dense_limit: Optional[int] = None) -> SpectralDecomposition:
    """
    Dense eigendecomposition of the Laplacian

    Args:
        L: Laplacian
        rank_tolerance: Eigenvalues below ``rank_tolerance·λ_max`` become exactly 0
        dense_limit: Largest vertex count accepted

    Returns:
        Ascending eigenpairs with orthonormal eigenvectors

    Raises:
        CapacityError: When ``n`` exceeds the dense limit
    """
    rank_tolerance = settings.rank_tolerance if rank_tolerance is None else rank_tolerance
    dense_limit = settings.dense_limit if dense_limit is None else dense_limit
    if not 0 < rank_tolerance < 1:
        raise InvalidInputError(f"rank tolerance must lie in (0, 1), got {rank_tolerance}")
    if L.n > dense_limit:
        raise CapacityError(
            f"Graph has {L.n} vertices, above the dense eigendecomposition limit of {dense_limit}; "
            "use the Chebyshev engine (--engine cheby:ORDER)",
            details={"n": L.n, "dense_limit": dense_limit},
        )

    eigenvalues, eigenvectors = scipy.linalg.eigh(L.toarray())
    lambda_max = max(float(eigenvalues[-1]), 0.0) if L.n else 0.0
    eigenvalues = np.where(eigenvalues < rank_tolerance * lambda_max, 0.0, eigenvalues)
    if lambda_max == 0.0:
        eigenvalues = np.zeros_like(eigenvalues)

    dec = SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors, rank_tolerance=rank_tolerance)
    logger.debug("Eigendecomposition: n=%d, nullity=%d, lambda_max=%.6g", L.n, dec.nullity, dec.lambda_max)
    return dec


def power_iteration(matrix: sp.spmatrix, tol: float, max_iter: int) -> Tuple[float, bool]:
    """
    Rayleigh-quotient power iteration for the dominant eigenvalue of a PSD matrix

    Returns:
        ``(estimate, converged)`` where convergence means two successive
        estimates agree within relative tolerance ``tol``
    """
    n = matrix.shape[0]
    x = make_rng(settings.default_seed, POWER_ITERATION_STREAM).standard_normal(n)
    x /= np.linalg.norm(x)
    theta = 0.0
    for _ in range(max_iter):
        y = matrix @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, True
        theta_new = float(x @ y)
        x = y / norm
        if abs(theta_new - theta) <= tol * abs(theta_new):
            return theta_new, True
        theta = theta_new
    return theta, False


def estimate_lambda_max(L: LaplacianMatrix, tol: Optional[float] = None, max_iter: Optional[int] = None,
                        safety: Optional[float] = None) -> float:
    """
    Upper estimate λ̂ of the largest Laplacian eigenvalue

    Power iteration times the safety factor, capped by the Gershgorin bound
    2·max_degree; the bound itself is returned when iteration does not converge.
    """
    tol = settings.power_iteration_tol if tol is None else tol
    max_iter = settings.power_iteration_max_iter if max_iter is None else max_iter
    safety = settings.lambda_max_safety if safety is None else safety

    if L.n == 0:
        return 0.0
    gershgorin = 2.0 * float(L.degrees.max())
    if gershgorin == 0.0:
        return 0.0

    theta, converged = power_iteration(L.matrix, tol, max_iter)
    if not converged:
        logger.warning("Power iteration did not converge in %d steps; using bound %.6g", max_iter, gershgorin)
        return gershgorin
    return min(safety * theta, gershgorin)


def chebyshev_fit(h: FilterSpec, b: float, order: int, grid_points: Optional[int] = None) -> ChebyshevFilter:
    """
    Chebyshev interpolant of ``h`` on ``[0, b]``

    Args:
        h: Filter to approximate
        b: Upper end of the interval
        order: Polynomial degree t
        grid_points: Size of the uniform grid used to report the sup-error

    Returns:
        Coefficients c_0..c_t with the measured sup-error

    Raises:
        FilterDomainError: If ``h`` is not finite on the nodes or the grid
    """
    grid_points = settings.fit_grid_points if grid_points is None else grid_points
    if not b > 0:
        raise InvalidInputError(f"Chebyshev interval upper bound must be positive, got {b}")
    if order < 1:
        raise InvalidInputError(f"Chebyshev order must be >= 1, got {order}")

    def mapped(x):
        return h.evaluate((np.asarray(x) + 1.0) * (b / 2.0))

    grid = np.linspace(0.0, b, grid_points)
    exact = h.evaluate(grid)
    if not np.all(np.isfinite(mapped(C.chebpts1(order + 1)))) or not np.all(np.isfinite(exact)):
        raise FilterDomainError(
            f"Filter {h.label()} is not finite on [0, {b!r}]; inverse filters need epsilon > 0",
            details={"filter": h.label(), "upper": b},
        )

    coefficients = C.chebinterpolate(mapped, order)
    approx = C.chebval(2.0 * grid / b - 1.0, coefficients)
    sup_error = float(np.max(np.abs(approx - exact)))
    return ChebyshevFilter(coefficients=coefficients, upper=float(b), filter_spec=h, sup_error=sup_error)


def _as_block(signals: np.ndarray, n: int) -> Tuple[np.ndarray, bool]:
    signals = np.asarray(signals, dtype=float)
    vector = signals.ndim == 1
    block = signals[:, None] if vector else signals
    if block.ndim != 2 or block.shape[0] != n:
        raise DimensionMismatchError(
            f"Signals have {block.shape[0]} rows, expected {n}",
            details={"signal_rows": int(block.shape[0]), "vertices": n},
        )
    return block, vector


def apply_filter_exact(dec: SpectralDecomposition, h: FilterSpec, signals: np.ndarray) -> np.ndarray:
    """Ψ h(Λ) Ψᵀ S, inverse filters take 0 on the zero eigenvalues"""
    block, vector = _as_block(signals, dec.n)
    response = h.evaluate_spectrum(dec.eigenvalues, dec.zero_mask)
    out = dec.eigenvectors @ (response[:, None] * dec.transform(block))
    return out[:, 0] if vector else out


def apply_filter_chebyshev(L: LaplacianMatrix, f: ChebyshevFilter, signals: np.ndarray,
                           lambda_bound: Optional[float] = None, threads: Optional[int] = None) -> np.ndarray:
    """
    Chebyshev recurrence for p(L)·S

    Uses ``t`` sparse products per column. Columns are processed in
    independent blocks, so results do not depend on the worker count.
    Inverse filters do not vanish on ker(L): callers center inputs per component.

    Args:
        L: Laplacian
        f: Fitted filter
        signals: ``n × m`` (or length-``n``) signals
        lambda_bound: Lower bound on λ_max (power iteration estimate) used to
                      validate the interval; estimated when omitted
        threads: Worker cap

    Raises:
        IntervalError: If the fit interval does not reach the spectrum bound
    """
    block, vector = _as_block(signals, L.n)
    if lambda_bound is None:
        lambda_bound, _ = power_iteration(L.matrix, settings.power_iteration_tol, settings.power_iteration_max_iter)
    if f.upper < lambda_bound * (1.0 - 1e-10):
        raise IntervalError(
            f"Chebyshev interval [0, {f.upper!r}] does not cover the spectrum (power iteration bound {lambda_bound!r})",
            details={"upper": f.upper, "bound": lambda_bound},
        )

    scale = 2.0 / f.upper
    coefficients = f.coefficients
    matrix = L.matrix

    def recurrence(columns: slice) -> np.ndarray:
        t_prev = block[:, columns]
        t_curr = scale * (matrix @ t_prev) - t_prev
        out = coefficients[0] * t_prev + coefficients[1] * t_curr
        for c in coefficients[2:]:
            t_next = 2.0 * (scale * (matrix @ t_curr) - t_curr) - t_prev
            out += c * t_next
            t_prev, t_curr = t_curr, t_next
        return out

    parts = map_blocks(recurrence, column_blocks(block.shape[1], threads), threads)
    out = np.hstack(parts) if parts else np.zeros_like(block)
    return out[:, 0] if vector else out


def spectral_drawing(dec: SpectralDecomposition, k: int) -> np.ndarray:
    """
    Hall spectral drawing rescaled by Λ_k^{-1/2}

    Returns:
        ``k × n`` matrix Λ_k^{-1/2} Ψ_kᵀ on the first ``k`` nonzero eigenpairs
    """
    nonzero = np.flatnonzero(~dec.zero_mask)
    if k > nonzero.size:
        raise InvalidInputError(f"Only {nonzero.size} nonzero eigenvalues, cannot draw {k} axes")
    chosen = nonzero[:k]
    return dec.eigenvectors[:, chosen].T / np.sqrt(dec.eigenvalues[chosen])[:, None]


class SpectralEngine:
    """
    Filter application bound to one Laplacian and one engine selection

    The exact decomposition and the λ̂ estimate are computed on first use;
    fitted Chebyshev filters are cached per filter specification.
    """

    def __init__(self, L: LaplacianMatrix, engine: Optional[EngineSpec] = None,
                 rank_tolerance: Optional[float] = None, threads: Optional[int] = None):
        self.laplacian = L
        self.engine = engine or EngineSpec.exact()
        self.rank_tolerance = rank_tolerance
        self.threads = threads
        self._filters: Dict[Tuple[FilterSpec, int], ChebyshevFilter] = {}
        self._lock = threading.Lock()

    @cached_property
    def decomposition(self) -> SpectralDecomposition:
        return eigendecompose(self.laplacian, self.rank_tolerance)

    @cached_property
    def power_bound(self) -> float:
        theta, _ = power_iteration(self.laplacian.matrix, settings.power_iteration_tol,
                                   settings.power_iteration_max_iter)
        return theta

    @cached_property
    def lambda_max_estimate(self) -> float:
        return estimate_lambda_max(self.laplacian)

    @property
    def interval(self) -> float:
        """Upper end of the Chebyshev interval (1 for an edgeless graph)"""
        return self.lambda_max_estimate if self.lambda_max_estimate > 0 else 1.0

    @property
    def epsilon(self) -> float:
        """Regularization of the inverse filters on the Chebyshev path"""
        return self.epsilon_for(self.engine)

    def epsilon_for(self, engine: Optional[EngineSpec] = None) -> float:
        engine = engine or self.engine
        if engine.epsilon is not None:
            return engine.epsilon
        return settings.epsilon_ratio * self.interval

    def regularized(self, h: FilterSpec, engine: Optional[EngineSpec] = None) -> FilterSpec:
        """Fill in the Chebyshev-path ε for inverse filters given without one"""
        if h.is_inverse and h.epsilon == 0.0:
            return h.model_copy(update={"epsilon": self.epsilon_for(engine)})
        return h

    def chebyshev_filter(self, h: FilterSpec, engine: Optional[EngineSpec] = None) -> ChebyshevFilter:
        engine = engine or self.engine
        order = engine.order or settings.chebyshev_order
        h = self.regularized(h, engine)
        key = (h, order)
        with self._lock:
            cached = self._filters.get(key)
        if cached is None:
            cached = chebyshev_fit(h, self.interval, order)
            logger.debug("Fitted %s at order %d on [0, %.6g], sup-error %.3g",
                         h.label(), order, cached.upper, cached.sup_error)
            with self._lock:
                self._filters[key] = cached
        return cached

    def apply(self, h: FilterSpec, signals: np.ndarray, engine: Optional[EngineSpec] = None) -> np.ndarray:
        """
        h(L)·signals on the selected path

        Args:
            h: Filter
            signals: ``n × m`` or length-``n`` signals
            engine: Override of the bound engine selection

        Returns:
            Filtered signals, same shape as the input
        """
        engine = engine or self.engine
        if engine.kind == EngineKind.EXACT:
            return apply_filter_exact(self.decomposition, h, signals)
        if self.lambda_max_estimate == 0.0:
            # edgeless graph: L = 0, so h(L) = h(0)·I
            h0 = float(self.regularized(h, engine).evaluate(0.0))
            return h0 * np.asarray(signals, dtype=float)
        f = self.chebyshev_filter(h, engine)
        return apply_filter_chebyshev(self.laplacian, f, signals, self.power_bound, self.threads)
