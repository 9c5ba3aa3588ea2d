import math
from datetime import datetime
from enum import Enum
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from gfmmd.core.config import settings


class KernelVariant(str, Enum):
    """Affinity kernel enumeration"""
    GAUSSIAN = "gaussian"
    ADAPTIVE_GAUSSIAN = "adaptive_gaussian"


class FilterVariant(str, Enum):
    """Spectral filter enumeration"""
    INVERSE_SQRT = "inverse_sqrt"
    INVERSE = "inverse"
    HEAT = "heat"
    IDENTITY = "identity"
    LINEAR = "linear"


class EngineKind(str, Enum):
    """Filter application path"""
    EXACT = "exact"
    CHEBYSHEV = "chebyshev"


class BenchmarkKind(str, Enum):
    """Benchmark suite enumeration"""
    SWISSROLL = "swissroll"
    GRID = "grid"
    LOCALIZATION = "localization"


# Report fields that depend on wall-clock time and are excluded from determinism checks
TIMING_FIELDS = frozenset({"timestamp", "all_pairs_seconds", "nearest_seconds", "embedding_seconds", "seconds"})


def encode_float(value: float) -> Any:
    """JSON-safe float: infinities become the strings ``"inf"`` / ``"-inf"``"""
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def decode_float(value: Any) -> float:
    """Inverse of ``encode_float``"""
    return float(value)


# Float that survives JSON: +inf is written as "inf" and read back
ReportFloat = Annotated[float, BeforeValidator(decode_float), PlainSerializer(encode_float, when_used="json")]


class BaseReport(BaseModel):
    """Base report model with common fields"""
    timestamp: datetime = Field(default_factory=datetime.utcnow)
    run_id: str = Field(..., description="Identifier derived from the configuration hash")
    api_version: str = settings.app_version


class FrozenSpec(BaseModel):
    """Base model for immutable, hashable specifications"""
    model_config = ConfigDict(frozen=True, use_enum_values=False, validate_default=True)
