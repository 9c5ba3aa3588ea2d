from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SwissRollDataset:
    """
    Point clouds around centers on the swiss roll

    ``clouds[i]`` holds the ``m`` points drawn around ``centers[i]``;
    ``params[i] = (t, h)`` are the roll coordinates of the center.
    """

    centers: np.ndarray
    params: np.ndarray
    clouds: np.ndarray
    geodesics: np.ndarray
    noise_sigma: float
    ambient_dim: int
    seed: int

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def m(self) -> int:
        return self.clouds.shape[1]

    def stacked_points(self) -> np.ndarray:
        """All ``n·m`` points, cloud ``i`` occupying rows ``i·m .. i·m + m - 1``"""
        return self.clouds.reshape(-1, self.ambient_dim)

    def membership_signals(self) -> np.ndarray:
        """``n·m × n`` matrix, column ``i`` uniform over the points of cloud ``i``"""
        total = self.n * self.m
        signals = np.zeros((total, self.n))
        for i in range(self.n):
            signals[i * self.m:(i + 1) * self.m, i] = 1.0 / self.m
        return signals
