from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from gfmmd.schemas.spectral import FilterSpec


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending Laplacian eigenpairs with small eigenvalues clamped to zero"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank_tolerance: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def zero_mask(self) -> np.ndarray:
        return self.eigenvalues == 0.0

    @property
    def nullity(self) -> int:
        return int(self.zero_mask.sum())

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.n else 0.0

    @property
    def fiedler_value(self) -> float:
        """Smallest nonzero eigenvalue"""
        nonzero = self.eigenvalues[~self.zero_mask]
        return float(nonzero[0]) if nonzero.size else 0.0

    def transform(self, signals: np.ndarray) -> np.ndarray:
        """Graph Fourier coefficients Ψᵀ S"""
        return self.eigenvectors.T @ signals

    def pseudoinverse(self) -> np.ndarray:
        """Dense Moore-Penrose pseudoinverse L^†"""
        inv = np.zeros_like(self.eigenvalues)
        nonzero = ~self.zero_mask
        inv[nonzero] = 1.0 / self.eigenvalues[nonzero]
        return (self.eigenvectors * inv) @ self.eigenvectors.T


@dataclass(frozen=True)
class ChebyshevFilter:
    """Chebyshev expansion of a filter on the interval ``[0, upper]``"""

    coefficients: np.ndarray
    upper: float
    filter_spec: FilterSpec
    sup_error: float

    @property
    def order(self) -> int:
        return self.coefficients.shape[0] - 1

    def evaluate(self, lam) -> np.ndarray:
        """Polynomial value at λ"""
        x = 2.0 * np.asarray(lam, dtype=float) / self.upper - 1.0
        return C.chebval(x, self.coefficients)
