from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gfmmd.core.config import settings
from gfmmd.schemas.bench import EngineOption, KernelOption
from gfmmd.schemas.common import BenchmarkKind, EngineKind
from gfmmd.schemas.graph import KernelSpec
from gfmmd.schemas.spectral import EngineSpec


class Subcommand(str, Enum):
    """Command-line subcommands"""
    BUILD_GRAPH = "build-graph"
    DISTANCES = "distances"
    LOCALIZE = "localize"
    WITNESS = "witness"
    BENCH = "bench"


_GRAPH_CONSUMERS = (Subcommand.DISTANCES, Subcommand.LOCALIZE, Subcommand.WITNESS)


class RunConfig(BaseModel):
    """One validated command-line invocation"""
    subcommand: Subcommand
    points: Optional[Path] = Field(None, description="Point-cloud CSV for build-graph")
    edges: Optional[Path] = Field(None, description="Edge list for build-graph passthrough")
    graph: Optional[Path] = Field(None, description="Edge-list graph for distances, localize and witness")
    signals: Optional[Path] = Field(None, description="Signal CSV, one column per signal")
    bench: Optional[BenchmarkKind] = Field(None, description="Benchmark suite")
    config: Optional[Path] = Field(None, description="Benchmark configuration JSON")
    engine: EngineOption = Field(default_factory=EngineSpec.exact)
    kernel: KernelOption = None
    k_nn: int = Field(10, ge=1, description="Neighbors per point")
    mass_tolerance: float = Field(settings.mass_tolerance, ge=0, description="Equal-component-mass tolerance")
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="Run seed")
    pair: Optional[Tuple[str, str]] = Field(None, description="Signal labels A, B for witness")
    out: Path = Field(..., description="Primary output path")
    embeddings: Optional[Path] = Field(None, description="Embedding CSV written by distances")
    threads: Optional[int] = Field(None, ge=1, description="Worker cap")
    verbose: bool = False

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "subcommand": "distances",
                "graph": "graph.tsv",
                "signals": "signals.csv",
                "engine": {"kind": "chebyshev", "order": 64},
                "out": "distances.csv",
                "embeddings": "embeddings.csv",
            }
        }
    )

    @field_validator("pair", mode="before")
    @classmethod
    def split_pair(cls, v):
        """Accept ``A,B``"""
        if isinstance(v, str):
            parts = [p.strip() for p in v.split(",")]
            if len(parts) != 2 or not all(parts):
                raise ValueError(f"pair must look like A,B, got '{v}'")
            return tuple(parts)
        return v

    @model_validator(mode="after")
    def check_combination(self) -> "RunConfig":
        """Reject flag combinations the subcommand cannot use"""
        if self.subcommand == Subcommand.BUILD_GRAPH:
            if (self.points is None) == (self.edges is None):
                raise ValueError("build-graph needs exactly one of --points or --edges")
            if self.edges is not None and self.kernel is not None:
                raise ValueError("--kernel only applies to --points input")
            self._forbid("graph", "signals", "bench", "config", "pair", "embeddings")
        elif self.subcommand in _GRAPH_CONSUMERS:
            if self.graph is None or self.signals is None:
                raise ValueError(f"{self.subcommand.value} needs --graph and --signals")
            self._forbid("points", "edges", "bench", "config", "kernel")
            if self.subcommand != Subcommand.DISTANCES:
                self._forbid("embeddings")
            if self.subcommand == Subcommand.WITNESS:
                if self.pair is None:
                    raise ValueError("witness needs --pair A,B")
                if self.engine.kind != EngineKind.EXACT:
                    raise ValueError("witness is computed on the exact path only")
            else:
                self._forbid("pair")
        elif self.subcommand == Subcommand.BENCH:
            if self.bench is None:
                raise ValueError("bench needs a suite: swissroll, grid or localization")
            self._forbid("points", "edges", "graph", "signals", "pair", "embeddings", "kernel")
        return self

    def _forbid(self, *names: str):
        given = [name for name in names if getattr(self, name) is not None]
        if given:
            raise ValueError(f"{self.subcommand.value} does not accept: {', '.join(given)}")

    def resolved_kernel(self) -> KernelSpec:
        return self.kernel if self.kernel is not None else KernelSpec.adaptive()
