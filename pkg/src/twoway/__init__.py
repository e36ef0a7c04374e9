"""Exact simulation of single-particle two-way signaling protocols and the
classical one-way bounds they beat."""

from .errors import BoundaryAmbiguityError, DomainError, NumericalError

__version__ = "0.1.0"

__all__ = ["BoundaryAmbiguityError", "DomainError", "NumericalError", "__version__"]
