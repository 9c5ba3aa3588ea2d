import numpy as np
import pytest
from scipy.integrate import quad

from gfmmd.core.exceptions import InvalidInputError
from gfmmd.services.swiss_roll import (
    HEIGHT_RANGE,
    T_RANGE,
    arc_length,
    arc_length_inverse,
    geodesic_matrix,
    sample_swiss_roll,
    swiss_geodesic,
)


def test_sample_shapes_and_ranges():
    """Test dataset shapes and that centers lie on the roll"""
    data = sample_swiss_roll(n=100, m=100, noise_sigma=0.25, ambient_dim=10, seed=0)
    t, h = data.params[:, 0], data.params[:, 1]

    assert data.clouds.shape == (100, 100, 10)
    assert data.stacked_points().shape == (10000, 10)
    assert np.all((T_RANGE[0] <= t) & (t <= T_RANGE[1]))
    assert np.all((HEIGHT_RANGE[0] <= h) & (h <= HEIGHT_RANGE[1]))
    np.testing.assert_allclose(data.centers, np.column_stack([t * np.cos(t), h, t * np.sin(t)]))


def test_noise_free_clouds_sit_on_padded_centers():
    """Test that zero noise puts every cloud point on its zero-padded center"""
    data = sample_swiss_roll(n=5, m=4, noise_sigma=0.0, ambient_dim=6, seed=1)

    for i in range(5):
        np.testing.assert_array_equal(data.clouds[i, :, :3], np.tile(data.centers[i], (4, 1)))
        np.testing.assert_array_equal(data.clouds[i, :, 3:], 0.0)


def test_sampling_is_deterministic():
    """Test that the same seed reproduces the dataset and another seed does not"""
    first = sample_swiss_roll(n=10, m=5, noise_sigma=0.25, ambient_dim=10, seed=42)
    second = sample_swiss_roll(n=10, m=5, noise_sigma=0.25, ambient_dim=10, seed=42)
    other = sample_swiss_roll(n=10, m=5, noise_sigma=0.25, ambient_dim=10, seed=43)

    np.testing.assert_array_equal(first.clouds, second.clouds)
    assert not np.array_equal(first.clouds, other.clouds)


def test_membership_signals():
    """Test that each cloud becomes the uniform distribution over its own points"""
    data = sample_swiss_roll(n=3, m=4, noise_sigma=0.1, ambient_dim=3, seed=0)
    signals = data.membership_signals()

    assert signals.shape == (12, 3)
    np.testing.assert_allclose(signals.sum(axis=0), 1.0)
    np.testing.assert_array_equal(signals[4:8, 1], 0.25)
    np.testing.assert_array_equal(signals[4:8, 0], 0.0)


def test_geodesic_along_height():
    """Test geodesics that only move along the height axis"""
    assert swiss_geodesic((5.0, 1.0), (5.0, 1.0)) == 0.0
    assert swiss_geodesic((5.0, 1.0), (5.0, 6.0)) == pytest.approx(5.0)


def test_arc_length_matches_quadrature():
    """Test the closed-form spiral arc length against numerical integration"""
    a, b = T_RANGE
    integral, _ = quad(lambda t: np.sqrt(1.0 + t * t), a, b, epsabs=1e-12, epsrel=1e-13)

    assert swiss_geodesic((a, 0.0), (b, 0.0)) == pytest.approx(integral, abs=1e-9)
    assert float(arc_length(0.0)) == 0.0


def test_geodesic_matrix_is_a_metric():
    """Test symmetry, zero diagonal and the triangle inequality of geodesics"""
    data = sample_swiss_roll(n=12, m=2, noise_sigma=0.0, ambient_dim=3, seed=5)
    G = geodesic_matrix(data.params)

    np.testing.assert_array_equal(G, G.T)
    np.testing.assert_array_equal(np.diag(G), 0.0)
    assert np.all(G[:, :, None] <= G[:, None, :] + G.T[None, :, :] + 1e-9)
    assert G[0, 1] == pytest.approx(swiss_geodesic(data.params[0], data.params[1]))


def test_sampling_rejects_bad_parameters():
    """Test that invalid sizes, dimensions and noise levels are rejected"""
    with pytest.raises(InvalidInputError):
        sample_swiss_roll(n=1, m=5, noise_sigma=0.1, ambient_dim=3, seed=0)
    with pytest.raises(InvalidInputError):
        sample_swiss_roll(n=5, m=5, noise_sigma=0.1, ambient_dim=2, seed=0)
    with pytest.raises(InvalidInputError):
        sample_swiss_roll(n=5, m=5, noise_sigma=-0.1, ambient_dim=3, seed=0)


def test_arc_length_inverse():
    """Test that the inverse arc length recovers the spiral parameter"""
    t = np.linspace(0.0, 20.0, 41)

    np.testing.assert_allclose(arc_length_inverse(arc_length(t)), t, atol=1e-4)
    assert float(arc_length_inverse(-3.0)) == 0.0


def test_manifold_spread_stays_on_the_roll():
    """Test that noise-free spread clouds lie on the roll around their centers"""
    data = sample_swiss_roll(n=6, m=50, noise_sigma=0.0, ambient_dim=5, seed=2, manifold_sigma=3.0)
    points = data.clouds[..., :3]
    t = np.hypot(points[..., 0], points[..., 2])

    np.testing.assert_allclose(points[..., 0], t * np.cos(t), atol=1e-9)
    np.testing.assert_allclose(points[..., 2], t * np.sin(t), atol=1e-9)
    np.testing.assert_array_equal(data.clouds[..., 3:], 0.0)
    offsets = arc_length(t) - arc_length(data.params[:, 0])[:, None]
    assert np.all(np.abs(np.median(offsets, axis=1)) < 3.0)
    assert np.all(np.std(points[..., 1], axis=1) > 0)


def test_zero_manifold_spread_matches_ambient_model():
    """Test that the default spread reproduces the ambient-noise-only clouds"""
    plain = sample_swiss_roll(n=5, m=4, noise_sigma=0.25, ambient_dim=6, seed=3)
    spread = sample_swiss_roll(n=5, m=4, noise_sigma=0.25, ambient_dim=6, seed=3, manifold_sigma=0.0)

    np.testing.assert_array_equal(plain.clouds, spread.clouds)
    with pytest.raises(InvalidInputError):
        sample_swiss_roll(n=5, m=4, noise_sigma=0.25, ambient_dim=6, seed=3, manifold_sigma=-1.0)
