"""Shared exception types."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of the operation."""


class CapacityError(RuntimeError):
    """Input is valid but exceeds the configured memory/time budget."""
