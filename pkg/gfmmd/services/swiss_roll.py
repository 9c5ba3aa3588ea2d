"""
Swiss roll point clouds with analytic geodesics.

Centers sit at (t·cos t, h, t·sin t) with t ~ U[3π/2, 9π/2] and h ~ U[0, 20].
The roll is isometric to a flat strip with coordinates (s(t), h), where
s(t) = (t·sqrt(1 + t²) + asinh t) / 2 is the arc length of the spiral.
"""

import logging
from typing import Tuple

import numpy as np

from gfmmd.core.exceptions import InvalidInputError
from gfmmd.core.seeding import DATASET_STREAM, make_rng
from gfmmd.models.datasets import SwissRollDataset

logger = logging.getLogger(__name__)

T_RANGE = (1.5 * np.pi, 4.5 * np.pi)
HEIGHT_RANGE = (0.0, 20.0)
INVERSE_GRID_POINTS = 20001


def arc_length(t) -> np.ndarray:
    """Arc length of the spiral r = t from 0 to t"""
    t = np.asarray(t, dtype=float)
    return 0.5 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))


def arc_length_inverse(s) -> np.ndarray:
    """Spiral parameter t >= 0 with arc_length(t) = s, by interpolation on a dense table"""
    s = np.maximum(np.asarray(s, dtype=float), 0.0)
    # arc_length(t) >= t²/2, so this table covers every s
    t_max = np.sqrt(2.0 * float(s.max(initial=0.0))) + 1.0
    t_grid = np.linspace(0.0, t_max, INVERSE_GRID_POINTS)
    return np.interp(s, arc_length(t_grid), t_grid)


def roll_embedding(t: np.ndarray, h: np.ndarray) -> np.ndarray:
    return np.stack([t * np.cos(t), h, t * np.sin(t)], axis=-1)


def swiss_geodesic(c1: Tuple[float, float], c2: Tuple[float, float]) -> float:
    """Geodesic distance between roll points given as ``(t, h)``"""
    (t1, h1), (t2, h2) = c1, c2
    return float(np.hypot(arc_length(t1) - arc_length(t2), h1 - h2))


def geodesic_matrix(params: np.ndarray) -> np.ndarray:
    """All pairwise geodesics for ``(t, h)`` rows"""
    s = arc_length(params[:, 0])
    h = params[:, 1]
    return np.hypot(s[:, None] - s[None, :], h[:, None] - h[None, :])


def sample_swiss_roll(
    n: int, m: int, noise_sigma: float, ambient_dim: int, seed: int, manifold_sigma: float = 0.0
) -> SwissRollDataset:
    """
    Sample ``n`` centers on the roll and a Gaussian cloud of ``m`` points around each

    With ``manifold_sigma > 0`` each cloud point is first drawn on the roll,
    N(0, manifold_sigma² I) around its center in the flat (s, h) coordinates.
    Every point is then zero-padded to ``ambient_dim`` and receives isotropic
    N(0, noise_sigma² I) ambient noise.

    Args:
        n: Number of centers
        m: Points per cloud
        noise_sigma: Standard deviation of the isotropic ambient noise
        ambient_dim: Ambient dimension (>= 3)
        seed: Run seed
        manifold_sigma: Standard deviation of the spread along the roll

    Returns:
        Dataset with centers, clouds and the geodesic matrix
    """
    if n < 2 or m < 2:
        raise InvalidInputError(f"Need n, m >= 2, got n={n}, m={m}")
    if ambient_dim < 3:
        raise InvalidInputError(f"Ambient dimension must be >= 3, got {ambient_dim}")
    if noise_sigma < 0 or manifold_sigma < 0:
        raise InvalidInputError(f"Noise must be nonnegative, got {noise_sigma} and {manifold_sigma}")

    rng = make_rng(seed, DATASET_STREAM)
    t = rng.uniform(*T_RANGE, size=n)
    h = rng.uniform(*HEIGHT_RANGE, size=n)
    centers = roll_embedding(t, h)

    if manifold_sigma > 0:
        offsets = manifold_sigma * rng.standard_normal((n, m, 2))
        point_t = arc_length_inverse(arc_length(t)[:, None] + offsets[..., 0])
        on_roll = roll_embedding(point_t, h[:, None] + offsets[..., 1])
    else:
        on_roll = np.broadcast_to(centers[:, None, :], (n, m, 3))

    padded = np.zeros((n, m, ambient_dim))
    padded[..., :3] = on_roll
    clouds = padded + noise_sigma * rng.standard_normal((n, m, ambient_dim))

    params = np.column_stack([t, h])
    logger.debug(
        "Sampled swiss roll: n=%d, m=%d, noise=%g, spread=%g, dim=%d, seed=%d",
        n, m, noise_sigma, manifold_sigma, ambient_dim, seed,
    )
    return SwissRollDataset(
        centers=centers,
        params=params,
        clouds=clouds,
        geodesics=geodesic_matrix(params),
        noise_sigma=noise_sigma,
        ambient_dim=ambient_dim,
        seed=seed,
    )
