from gfmmd.models.graph import ComponentLabeling, Graph, LaplacianMatrix
from gfmmd.models.signals import DistanceMatrix, EmbeddingMatrix, SignalMatrix
from gfmmd.models.datasets import SwissRollDataset
from gfmmd.models.spectral import ChebyshevFilter, SpectralDecomposition

__all__ = [
    "ChebyshevFilter",
    "ComponentLabeling",
    "DistanceMatrix",
    "EmbeddingMatrix",
    "Graph",
    "LaplacianMatrix",
    "SignalMatrix",
    "SpectralDecomposition",
    "SwissRollDataset",
]
