from typing import Annotated, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from gfmmd.schemas.common import BaseReport, BenchmarkKind, ReportFloat
from gfmmd.schemas.graph import GraphStats, KernelSpec
from gfmmd.schemas.spectral import EngineSpec

# Bimodal localization scores on the 16×16 grid reported in the literature
REFERENCE_BIMODAL_SCORES = [11.14, 8.66, 6.13, 6.09]

DEFAULT_SWISS_ROLL_K_NN = 10


def _coerce_kernel(value):
    if isinstance(value, str):
        return KernelSpec.parse(value)
    return value


def _coerce_engine(value):
    if isinstance(value, str):
        return EngineSpec.parse(value)
    return value


KernelOption = Annotated[Optional[KernelSpec], BeforeValidator(_coerce_kernel)]
EngineOption = Annotated[EngineSpec, BeforeValidator(_coerce_engine)]


class SwissRollConfig(BaseModel):
    """Swiss-roll distribution-distance benchmark configuration"""
    n: int = Field(20, ge=2, description="Number of centers on the roll")
    m: int = Field(20, ge=2, description="Points sampled around each center")
    noise_sigma: float = Field(0.25, ge=0, description="Isotropic ambient noise standard deviation")
    manifold_sigma: float = Field(4.0, ge=0, description="Spread of each cloud along the roll, in arc-length units")
    ambient_dim: int = Field(10, ge=3, description="Ambient dimension, centers are zero-padded")
    k_nn: Optional[int] = Field(None, ge=1, description="Neighbors per point (default 10)")
    kernel: KernelOption = Field(None, description="Affinity kernel (default adaptive with the configured k_bw)")
    include_exact: bool = Field(True, description="Run the exact spectral path")
    orders: List[int] = Field(default_factory=lambda: [8, 64, 512], description="Chebyshev orders")
    mmd_sigma: Optional[float] = Field(None, gt=0, description="Kernel-MMD bandwidth (default median pairwise distance)")
    mmd_samples: int = Field(20, ge=2, description="Points drawn with replacement per cloud for kernel MMD")
    include_baseline: bool = Field(True, description="Run the kernel-MMD baseline")
    nearest_k: int = Field(10, ge=1, description="Size of the nearest-distribution query")
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2], min_length=1, description="Run seeds")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "n": 20,
                "m": 20,
                "noise_sigma": 0.25,
                "manifold_sigma": 4.0,
                "ambient_dim": 10,
                "kernel": "adaptive:5",
                "orders": [8, 64],
                "seeds": [0, 1, 2],
            }
        }
    )

    @field_validator("orders")
    @classmethod
    def validate_orders(cls, v):
        """Orders must be positive and distinct"""
        if any(order < 1 for order in v):
            raise ValueError("Chebyshev orders must be >= 1")
        if len(set(v)) != len(v):
            raise ValueError("Chebyshev orders must be distinct")
        return v

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v):
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        if any(seed < 0 for seed in v):
            raise ValueError("seeds must be nonnegative")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> "SwissRollConfig":
        if self.k_nn is not None and self.k_nn >= self.n * self.m:
            raise ValueError(f"k_nn={self.k_nn} must be below the point count {self.n * self.m}")
        if self.nearest_k >= self.n:
            raise ValueError(f"nearest_k={self.nearest_k} must be below n={self.n}")
        if not self.include_exact and not self.orders:
            raise ValueError("at least one GFMMD method must be enabled")
        return self

    def resolved_k_nn(self) -> int:
        return self.k_nn if self.k_nn is not None else min(DEFAULT_SWISS_ROLL_K_NN, self.n * self.m - 1)

    def resolved_kernel(self) -> KernelSpec:
        return self.kernel if self.kernel is not None else KernelSpec.adaptive()


class GridConfig(BaseModel):
    """Grid translation experiment configuration"""
    rows: int = Field(16, ge=2)
    cols: int = Field(16, ge=2)
    tau: float = Field(16.0, gt=0, description="Heat diffusion time")
    center: Tuple[int, int] = Field((8, 4), description="Grid position (row, col) of the fixed bump")
    shift_step: int = Field(2, ge=1, description="Column offset between consecutive shifted bumps")
    shifts: int = Field(4, ge=2, description="Number of shifted bumps, offsets 0, step, 2·step, ...")
    engine: EngineOption = Field(default_factory=EngineSpec.exact, description="Filter path for the distances")

    @model_validator(mode="after")
    def check_positions(self) -> "GridConfig":
        row, col = self.center
        last = col + self.shift_step * (self.shifts - 1)
        if not (0 <= row < self.rows and 0 <= col and last < self.cols):
            raise ValueError(f"bumps from {self.center} to column {last} do not fit a {self.rows}×{self.cols} grid")
        return self

    def vertex(self, row: int, col: int) -> int:
        return row * self.cols + col


class LocalizationConfig(BaseModel):
    """Diffusion and hop-neighborhood localization checks"""
    rows: int = Field(16, ge=2)
    cols: int = Field(16, ge=2)
    edges: Optional[str] = Field(None, description="Edge-list file used instead of the grid")
    center: Optional[int] = Field(None, ge=0, description="Center vertex (default grid position (8, 4), or 0)")
    taus: List[float] = Field(default_factory=lambda: [2.0 ** 0, 2.0 ** 4, 2.0 ** 8, 2.0 ** 12])
    hops: List[int] = Field(default_factory=lambda: [1, 4, 16, 64])
    engine: EngineOption = Field(default_factory=EngineSpec.exact)

    @field_validator("taus")
    @classmethod
    def validate_taus(cls, v):
        if not v or any(t <= 0 for t in v) or sorted(v) != list(v):
            raise ValueError("taus must be positive and increasing")
        return v

    @field_validator("hops")
    @classmethod
    def validate_hops(cls, v):
        if not v or any(h < 0 for h in v) or sorted(v) != list(v):
            raise ValueError("hops must be nonnegative and increasing")
        return v

    def resolved_center(self) -> int:
        if self.center is not None:
            return self.center
        if self.edges is not None:
            return 0
        return min(8, self.rows - 1) * self.cols + min(4, self.cols - 1)


class SeedResult(BaseModel):
    """One method on one seed"""
    seed: int
    rho: Optional[float] = Field(
        ..., ge=-1, le=1, description="Spearman correlation with geodesics, null when the distances are all tied"
    )
    embedding_seconds: float = Field(0.0, ge=0)
    all_pairs_seconds: float = Field(..., ge=0)
    nearest_seconds: float = Field(..., ge=0)


class MethodResult(BaseModel):
    """Spearman-ρ and timings of one method over all seeds"""
    method: str = Field(..., description="exact, cheby:ORDER or kernel_mmd")
    per_seed: List[SeedResult]
    rho_mean: Optional[float] = Field(..., ge=-1, le=1, description="Mean over seeds with a defined rho")
    rho_std: Optional[float] = Field(..., ge=0)


class BenchmarkReport(BaseReport):
    """Swiss-roll benchmark report"""
    kind: BenchmarkKind = BenchmarkKind.SWISSROLL
    config: SwissRollConfig
    graphs: List[GraphStats] = Field(..., description="Joint graph summary per seed")
    methods: List[MethodResult]

    _scatter: Optional[pd.DataFrame] = PrivateAttr(default=None)

    @property
    def scatter(self) -> Optional[pd.DataFrame]:
        """Per-pair ``(geodesic, distance)`` rows of the run, not serialized"""
        return self._scatter

    def with_scatter(self, frame: pd.DataFrame) -> "BenchmarkReport":
        self._scatter = frame
        return self

    def method(self, name: str) -> MethodResult:
        for result in self.methods:
            if result.method == name:
                return result
        raise KeyError(name)


class GridReport(BaseReport):
    """Grid translation report"""
    kind: BenchmarkKind = BenchmarkKind.GRID
    config: GridConfig
    offsets: List[int] = Field(..., description="Column offsets of the shifted bumps")
    distances: List[ReportFloat] = Field(..., description="GFMMD between the fixed and each shifted bump")
    distances_increasing: bool
    witness_gaps: List[Optional[float]] = Field(..., description="(P - Q)ᵀf* per shift, None where P = Q")
    witnesses: List[Optional[List[float]]]
    bimodal_scores: List[ReportFloat] = Field(..., description="Localization of the even mixture of both bumps")
    bimodal_nonincreasing: bool
    reference_scores: List[float] = Field(default_factory=lambda: list(REFERENCE_BIMODAL_SCORES))
    relative_deviation: List[float]
    normalized_bimodal_scores: List[ReportFloat] = Field(..., description="Same scores with diffusion time τ/λ_max")
    normalized_relative_deviation: List[float]
    seconds: float = Field(..., ge=0)


class LocalizationReport(BaseReport):
    """Diffusion and hop-neighborhood localization report"""
    kind: BenchmarkKind = BenchmarkKind.LOCALIZATION
    config: LocalizationConfig
    center: int
    diffusion_scores: List[ReportFloat]
    diffusion_decreasing: bool
    hop_sizes: List[int] = Field(..., description="Vertices within each hop radius")
    hop_scores: List[ReportFloat]
    hop_nonincreasing: bool
    seconds: float = Field(..., ge=0)
