"""Exception hierarchy.

The CLI maps these onto exit codes: ``ConfigError``/``InvalidParameterError``
give 2, ``CapabilityError`` subclasses give 3, ``NumericalFailure`` gives 4.
"""

from __future__ import annotations


class EntropyError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameterError(EntropyError, ValueError):
    pass


class DimensionMismatchError(InvalidParameterError):
    pass


class ConfigError(InvalidParameterError):
    pass


class CapabilityError(EntropyError):
    """A request outside what the oracle can certify (dimension, budget, p)."""


class UnsupportedDimensionError(CapabilityError):
    pass


class UnsupportedOperationError(CapabilityError):
    pass


class BudgetExceededError(CapabilityError):
    def __init__(self, message: str, achieved_eta: float):
        super().__init__(message)
        self.achieved_eta = achieved_eta


class NumericalFailure(EntropyError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual
