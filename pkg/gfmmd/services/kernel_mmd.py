import numpy as np
from scipy.spatial.distance import cdist

from gfmmd.core.exceptions import InvalidInputError


def gaussian_gram(x: np.ndarray, y: np.ndarray, sigma: float) -> np.ndarray:
    """exp(-‖x - y‖² / σ²) for all row pairs"""
    return np.exp(-cdist(x, y, "sqeuclidean") / sigma ** 2)


def kernel_mmd_baseline(X: np.ndarray, Y: np.ndarray, sigma: float) -> float:
    """
    Unbiased two-sample estimate of the squared kernel MMD

    Mean kernel over within-X pairs (i ≠ j), plus the same within Y, minus
    twice the mean over cross pairs. The estimate can be negative.

    Args:
        X: First sample, ``m × d``
        Y: Second sample, ``k × d``
        sigma: Gaussian kernel bandwidth

    Returns:
        MMD² estimate
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    m, k = X.shape[0], Y.shape[0]
    if m < 2 or k < 2:
        raise InvalidInputError(f"Need at least 2 samples on each side, got {m} and {k}")
    if not sigma > 0:
        raise InvalidInputError(f"Kernel bandwidth must be positive, got {sigma}")

    Kxx = gaussian_gram(X, X, sigma)
    Kyy = gaussian_gram(Y, Y, sigma)
    Kxy = gaussian_gram(X, Y, sigma)

    within_x = (Kxx.sum() - np.trace(Kxx)) / (m * (m - 1))
    within_y = (Kyy.sum() - np.trace(Kyy)) / (k * (k - 1))
    cross = Kxy.mean()
    return float(within_x + within_y - 2.0 * cross)
