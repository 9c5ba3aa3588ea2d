"""
Exception hierarchy for the Graph Fourier MMD toolkit.

Every error carries a short machine-readable ``code`` next to the human message,
so the command line can report failures as ``error [CODE]: message``.
"""

from typing import Any, Dict, Optional


class GFMMDError(Exception):
    """Base exception for all toolkit errors"""

    code = "GFMMD_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Error payload in the ``{"error", "message", "code"}`` shape"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "code": self.code,
            "details": self.details,
        }


class InvalidGraphError(GFMMDError):
    """Graph violates nonnegativity, symmetry or self-loop constraints"""

    code = "INVALID_GRAPH"


class InvalidInputError(GFMMDError):
    """Rejected numeric input (non-finite coordinates, bad vertex indices, ...)"""

    code = "INVALID_INPUT"


class ParseError(GFMMDError):
    """Malformed input file"""

    code = "PARSE_ERROR"

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:"
        if line_number is not None:
            location += f"{line_number}:"
        super().__init__(
            f"{location} {message}" if location else message,
            details={"path": path, "line_number": line_number},
        )
        self.path = path
        self.line_number = line_number


class CapacityError(GFMMDError):
    """Graph too large for the dense eigendecomposition"""

    code = "CAPACITY_EXCEEDED"


class FilterDomainError(GFMMDError):
    """Spectral filter is not finite on the requested interval"""

    code = "FILTER_DOMAIN"


class IntervalError(GFMMDError):
    """Chebyshev interval does not cover the Laplacian spectrum"""

    code = "INTERVAL_TOO_SMALL"


class DimensionMismatchError(GFMMDError):
    """Signal or matrix dimensions disagree"""

    code = "DIMENSION_MISMATCH"


class SignalValidationError(GFMMDError):
    """Signals cannot be interpreted as probability distributions"""

    code = "INVALID_SIGNAL"


class UndefinedWitnessError(GFMMDError):
    """Witness function requested for identical distributions"""

    code = "UNDEFINED_WITNESS"


class CouplingError(GFMMDError):
    """Coupling marginals do not match the two distributions"""

    code = "INVALID_COUPLING"


class UndefinedCorrelationError(GFMMDError):
    """Rank correlation of a constant sequence"""

    code = "UNDEFINED_CORRELATION"


class ConfigurationError(GFMMDError):
    """Inconsistent run or benchmark configuration"""

    code = "INVALID_CONFIG"


class FileAccessError(GFMMDError):
    """Input file missing or unreadable, or output not writable"""

    code = "IO_ERROR"
