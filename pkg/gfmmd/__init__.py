"""Graph Fourier MMD: distances between distributions on weighted graphs."""

from gfmmd.core.config import settings
from gfmmd.models import (
    ChebyshevFilter,
    ComponentLabeling,
    DistanceMatrix,
    EmbeddingMatrix,
    Graph,
    LaplacianMatrix,
    SignalMatrix,
    SpectralDecomposition,
    SwissRollDataset,
)
from gfmmd.schemas.graph import KernelSpec
from gfmmd.schemas.spectral import EngineSpec, FilterSpec
from gfmmd.services.gfmmd_metric import GraphFourierMMD, normalize_signals

__version__ = settings.app_version

__all__ = [
    "ChebyshevFilter",
    "ComponentLabeling",
    "DistanceMatrix",
    "EmbeddingMatrix",
    "EngineSpec",
    "FilterSpec",
    "Graph",
    "GraphFourierMMD",
    "KernelSpec",
    "LaplacianMatrix",
    "SignalMatrix",
    "SpectralDecomposition",
    "SwissRollDataset",
    "normalize_signals",
]
