from typing import Optional

import numpy as np
from pydantic import Field, model_validator

from gfmmd.core.config import settings
from gfmmd.core.exceptions import ConfigurationError
from gfmmd.schemas.common import EngineKind, FilterVariant, FrozenSpec


class FilterSpec(FrozenSpec):
    """Scalar spectral filter h(λ)"""
    variant: FilterVariant
    epsilon: float = Field(0.0, ge=0, description="Regularization for the inverse filters")
    tau: Optional[float] = Field(None, gt=0, description="Diffusion time of the heat filter")

    @model_validator(mode="after")
    def check_parameters(self) -> "FilterSpec":
        if self.variant == FilterVariant.HEAT and self.tau is None:
            raise ValueError("heat filter requires tau")
        return self

    @classmethod
    def inverse_sqrt(cls, epsilon: float = 0.0) -> "FilterSpec":
        return cls(variant=FilterVariant.INVERSE_SQRT, epsilon=epsilon)

    @classmethod
    def inverse(cls, epsilon: float = 0.0) -> "FilterSpec":
        return cls(variant=FilterVariant.INVERSE, epsilon=epsilon)

    @classmethod
    def heat(cls, tau: float) -> "FilterSpec":
        return cls(variant=FilterVariant.HEAT, tau=tau)

    @classmethod
    def identity(cls) -> "FilterSpec":
        return cls(variant=FilterVariant.IDENTITY)

    @classmethod
    def linear(cls) -> "FilterSpec":
        return cls(variant=FilterVariant.LINEAR)

    @property
    def is_inverse(self) -> bool:
        return self.variant in (FilterVariant.INVERSE_SQRT, FilterVariant.INVERSE)

    def evaluate(self, lam) -> np.ndarray:
        """h(λ), vectorized; the inverse filters are infinite at -ε"""
        lam = np.asarray(lam, dtype=float)
        if self.variant == FilterVariant.IDENTITY:
            return np.ones_like(lam)
        if self.variant == FilterVariant.LINEAR:
            return lam.copy()
        if self.variant == FilterVariant.HEAT:
            return np.exp(-self.tau * lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            shifted = lam + self.epsilon
            if self.variant == FilterVariant.INVERSE_SQRT:
                return 1.0 / np.sqrt(shifted)
            return 1.0 / shifted

    def evaluate_spectrum(self, eigenvalues: np.ndarray, zero_mask: np.ndarray) -> np.ndarray:
        """
        Filter values on a clamped spectrum, pseudoinverse convention

        Inverse filters ignore ε here and are 0 on eigenvalues flagged as zero.
        """
        if not self.is_inverse:
            return self.evaluate(eigenvalues)
        values = np.zeros_like(eigenvalues, dtype=float)
        nonzero = ~zero_mask
        if self.variant == FilterVariant.INVERSE_SQRT:
            values[nonzero] = 1.0 / np.sqrt(eigenvalues[nonzero])
        else:
            values[nonzero] = 1.0 / eigenvalues[nonzero]
        return values

    def label(self) -> str:
        if self.variant == FilterVariant.HEAT:
            return f"heat(tau={self.tau!r})"
        if self.is_inverse:
            return f"{self.variant.value}(eps={self.epsilon!r})"
        return self.variant.value


class EngineSpec(FrozenSpec):
    """Selection of the filter application path"""
    kind: EngineKind = EngineKind.EXACT
    order: Optional[int] = Field(None, ge=1, description="Chebyshev polynomial order")
    epsilon: Optional[float] = Field(None, gt=0, description="Absolute regularization, default ratio·λ̂")

    @classmethod
    def exact(cls) -> "EngineSpec":
        return cls(kind=EngineKind.EXACT)

    @classmethod
    def chebyshev(cls, order: Optional[int] = None, epsilon: Optional[float] = None) -> "EngineSpec":
        order = settings.chebyshev_order if order is None else order
        return cls(kind=EngineKind.CHEBYSHEV, order=order, epsilon=epsilon)

    @classmethod
    def parse(cls, text: str, order: Optional[int] = None, epsilon: Optional[float] = None) -> "EngineSpec":
        """
        Parse ``exact``, ``cheby`` or ``cheby:ORDER``

        Args:
            text: Engine description from the command line
            order: Order given separately (``--order``); must agree with ``cheby:ORDER``
            epsilon: Absolute regularization (``--epsilon``)

        Returns:
            Parsed engine specification

        Raises:
            ConfigurationError: On unknown engines or conflicting options
        """
        name, _, value = text.partition(":")
        name = name.strip().lower()
        if name == "exact":
            if value or order is not None or epsilon is not None:
                raise ConfigurationError("the exact engine takes no order or epsilon")
            return cls.exact()
        if name in ("cheby", "chebyshev"):
            inline = None
            if value:
                try:
                    inline = int(value)
                except ValueError:
                    raise ConfigurationError(f"Invalid Chebyshev order '{value}'")
            if inline is not None and order is not None and inline != order:
                raise ConfigurationError(f"Conflicting Chebyshev orders {inline} and {order}")
            try:
                return cls.chebyshev(order=inline if inline is not None else order, epsilon=epsilon)
            except ValueError as e:
                raise ConfigurationError(f"Invalid engine '{text}': {e}")
        raise ConfigurationError(f"Unknown engine '{text}', expected exact or cheby:ORDER")

    def label(self) -> str:
        if self.kind == EngineKind.EXACT:
            return "exact"
        return f"cheby:{self.order}"
