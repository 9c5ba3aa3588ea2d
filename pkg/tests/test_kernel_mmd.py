import numpy as np
import pytest

from gfmmd.core.exceptions import InvalidInputError
from gfmmd.core.seeding import make_rng
from gfmmd.services.kernel_mmd import gaussian_gram, kernel_mmd_baseline


def test_gaussian_gram():
    """Test the gaussian kernel on a few point pairs"""
    x = np.array([[0.0, 0.0], [1.0, 0.0]])
    y = np.array([[0.0, 2.0]])
    gram = gaussian_gram(x, y, 2.0)

    np.testing.assert_allclose(gram[:, 0], [np.exp(-1.0), np.exp(-1.25)])


def test_mmd_two_point_samples():
    """Test the unbiased estimate on two constant samples"""
    X = np.array([[0.0], [0.0]])
    Y = np.array([[1.0], [1.0]])

    assert kernel_mmd_baseline(X, Y, 1.0) == pytest.approx(2.0 - 2.0 * np.exp(-1.0))


def test_mmd_same_distribution_near_zero():
    """Test that two samples of one distribution give an estimate near zero"""
    rng = make_rng(3)
    X, Y = rng.standard_normal((200, 2)), rng.standard_normal((200, 2))
    shifted = Y + 3.0

    assert abs(kernel_mmd_baseline(X, Y, 1.0)) < 0.05
    assert kernel_mmd_baseline(X, shifted, 1.0) > 0.3


def test_mmd_rejects_bad_input():
    """Test that single-point samples and non-positive bandwidths are rejected"""
    with pytest.raises(InvalidInputError):
        kernel_mmd_baseline(np.zeros((1, 2)), np.zeros((3, 2)), 1.0)
    with pytest.raises(InvalidInputError):
        kernel_mmd_baseline(np.zeros((2, 2)), np.zeros((3, 2)), 0.0)


def _brute_force_mmd(X, Y, sigma):
    def k(a, b):
        squared = 0.0
        for d in range(len(a)):
            squared += (a[d] - b[d]) ** 2
        return np.exp(-squared / sigma ** 2)

    m, n = len(X), len(Y)
    within_x = sum(k(X[i], X[j]) for i in range(m) for j in range(m) if i != j) / (m * (m - 1))
    within_y = sum(k(Y[i], Y[j]) for i in range(n) for j in range(n) if i != j) / (n * (n - 1))
    cross = sum(k(X[i], Y[j]) for i in range(m) for j in range(n)) / (m * n)
    return within_x + within_y - 2.0 * cross


def test_mmd_matches_brute_force_sums(rng):
    """Test the vectorized estimate against explicit pair sums"""
    for sigma in (0.5, 1.0, 3.0):
        X, Y = rng.standard_normal((7, 3)), rng.standard_normal((5, 3)) + 0.5

        assert kernel_mmd_baseline(X, Y, sigma) == pytest.approx(_brute_force_mmd(X, Y, sigma), rel=1e-10, abs=1e-14)


def test_mmd_vanishes_for_wide_kernels(rng):
    """Test that σ²·MMD² approaches 2‖x̄ - ȳ‖² minus the sample-variance corrections as σ grows"""
    X, Y = rng.standard_normal((6, 2)), rng.standard_normal((4, 2)) + 2.0
    sigma = 1e3
    variance_x = np.sum(X.var(axis=0))
    variance_y = np.sum(Y.var(axis=0))
    limit = (2.0 * np.sum((X.mean(axis=0) - Y.mean(axis=0)) ** 2)
             - 2.0 * variance_x / (len(X) - 1) - 2.0 * variance_y / (len(Y) - 1))

    assert abs(kernel_mmd_baseline(X, Y, 1e8)) < 1e-12
    assert sigma ** 2 * kernel_mmd_baseline(X, Y, sigma) == pytest.approx(limit, rel=1e-3, abs=1e-6)
