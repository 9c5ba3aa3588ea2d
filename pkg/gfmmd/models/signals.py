from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from gfmmd.core.exceptions import DimensionMismatchError, SignalValidationError


def default_labels(m: int) -> List[str]:
    return [f"s{i}" for i in range(m)]


@dataclass(frozen=True)
class SignalMatrix:
    """``n × m`` matrix of vertex signals, one labeled column per signal"""

    values: np.ndarray
    labels: Sequence[str]
    normalized: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise DimensionMismatchError(f"Signals must be a matrix, got {values.ndim} dimensions")
        labels = list(self.labels) if self.labels is not None else default_labels(values.shape[1])
        if len(labels) != values.shape[1]:
            raise DimensionMismatchError(
                f"{len(labels)} labels for {values.shape[1]} signal columns",
                details={"labels": len(labels), "columns": values.shape[1]},
            )
        if len(set(labels)) != len(labels):
            duplicates = sorted({label for label in labels if labels.count(label) > 1})
            raise SignalValidationError(f"Signal labels must be unique, duplicated: {duplicates}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def column(self, key) -> np.ndarray:
        """Column by label or position"""
        return self.values[:, self.index(key)]

    def index(self, key) -> int:
        if isinstance(key, (int, np.integer)):
            if not 0 <= key < self.m:
                raise SignalValidationError(f"Signal index {key} out of range [0, {self.m})")
            return int(key)
        try:
            return self.labels.index(key)
        except ValueError:
            raise SignalValidationError(f"Unknown signal '{key}'", details={"labels": list(self.labels)})


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Rows are feature vectors E_i = L^{-1/2} f_i"""

    vectors: np.ndarray
    labels: Sequence[str]
    provenance: str

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric ``m × m`` distances, ``inf`` where component masses differ"""

    values: np.ndarray
    labels: Sequence[str]

    @property
    def m(self) -> int:
        return self.values.shape[0]

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def upper_triangle(self) -> np.ndarray:
        rows, cols = np.triu_indices(self.m, k=1)
        return self.values[rows, cols]
