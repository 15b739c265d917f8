"""Exception types shared across the package."""


class OmspecError(Exception):
    """Base class for all package-specific errors."""


class DomainError(OmspecError, ValueError):
    """A closed-form expression was evaluated outside its domain of validity."""


class ConvergenceError(OmspecError, RuntimeError):
    """A brute-force reference computation failed its convergence test."""


class NormalizationError(OmspecError, RuntimeError):
    """A probability normalization check failed beyond tolerance."""


class TruncationError(OmspecError, RuntimeError):
    """A Hilbert-space or distribution truncation cannot meet its tail bound."""


class GridError(OmspecError, ValueError):
    """A detuning grid is unsuitable for the requested operation."""


class InferenceError(OmspecError, RuntimeError):
    """Spectral inversion produced inconsistent coupling estimates."""
