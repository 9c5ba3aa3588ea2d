from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from gfmmd.core.config import settings
from gfmmd.core.exceptions import ConfigurationError
from gfmmd.schemas.common import FrozenSpec, KernelVariant


class KernelSpec(FrozenSpec):
    """Affinity kernel applied to pairwise Euclidean distances"""
    variant: KernelVariant = KernelVariant.GAUSSIAN
    sigma: Optional[float] = Field(None, gt=0, description="Bandwidth of the fixed gaussian kernel")
    k_bw: Optional[int] = Field(None, ge=1, description="Neighbor rank defining adaptive bandwidths")

    @model_validator(mode="before")
    @classmethod
    def default_bandwidth_rank(cls, data):
        if isinstance(data, dict) and data.get("k_bw") is None:
            variant = data.get("variant")
            if variant in (KernelVariant.ADAPTIVE_GAUSSIAN, KernelVariant.ADAPTIVE_GAUSSIAN.value):
                data = {**data, "k_bw": settings.adaptive_k_bw}
        return data

    @model_validator(mode="after")
    def check_parameters(self) -> "KernelSpec":
        if self.variant == KernelVariant.GAUSSIAN and self.sigma is None:
            raise ValueError("gaussian kernel requires sigma")
        return self

    @classmethod
    def gaussian(cls, sigma: float) -> "KernelSpec":
        return cls(variant=KernelVariant.GAUSSIAN, sigma=sigma)

    @classmethod
    def adaptive(cls, k_bw: Optional[int] = None) -> "KernelSpec":
        return cls(variant=KernelVariant.ADAPTIVE_GAUSSIAN, k_bw=k_bw)

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """
        Parse the command-line form ``gaussian:SIGMA`` or ``adaptive:K``

        Args:
            text: Kernel description

        Returns:
            Parsed kernel specification

        Raises:
            ConfigurationError: If the text is not a valid kernel description
        """
        name, _, value = text.partition(":")
        name = name.strip().lower()
        try:
            if name == "gaussian":
                return cls.gaussian(float(value))
            if name in ("adaptive", "adaptive_gaussian"):
                return cls.adaptive(int(value) if value else None)
        except ValueError as e:
            raise ConfigurationError(f"Invalid kernel '{text}': {e}")
        raise ConfigurationError(f"Unknown kernel '{text}', expected gaussian:SIGMA or adaptive:K")

    def weights(self, distances: np.ndarray, sigma_a: Optional[np.ndarray] = None,
                sigma_b: Optional[np.ndarray] = None) -> np.ndarray:
        """
        Kernel values for an array of distances

        For the adaptive variant ``sigma_a`` / ``sigma_b`` are the per-endpoint bandwidths;
        the value is ½[exp(-d²/σ_a²) + exp(-d²/σ_b²)].
        """
        d2 = np.asarray(distances, dtype=float) ** 2
        if self.variant == KernelVariant.GAUSSIAN:
            return np.exp(-d2 / self.sigma ** 2)
        if sigma_a is None or sigma_b is None:
            raise ConfigurationError("adaptive kernel needs per-vertex bandwidths")
        return 0.5 * (_gauss(d2, sigma_a) + _gauss(d2, sigma_b))

    def label(self) -> str:
        if self.variant == KernelVariant.GAUSSIAN:
            return f"gaussian:{self.sigma!r}"
        return f"adaptive:{self.k_bw}"


def _gauss(d2: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), d2.shape)
    out = np.where(d2 == 0, 1.0, 0.0)
    positive = sigma > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.exp(-d2 / np.where(positive, sigma, 1.0) ** 2)
    return np.where(positive, scaled, out)


class GraphStats(BaseModel):
    """Summary printed after building or loading a graph"""
    n: int = Field(..., ge=0, description="Vertex count")
    edge_count: int = Field(..., ge=0, description="Undirected edges")
    component_count: int = Field(..., ge=0, description="Connected components")
    min_degree: float = Field(..., ge=0)
    max_degree: float = Field(..., ge=0)
    total_weight: float = Field(..., ge=0)
