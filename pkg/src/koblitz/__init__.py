"""Elliptic-curve twin-prime censuses, class numbers, singular series, and
Euler-product constants, with a CLI harness for desk-scale experiments."""

from .errors import CapacityError, DomainError

__all__ = ["CapacityError", "DomainError"]
__version__ = "0.1.0"
