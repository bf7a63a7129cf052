"""Shared exception types."""


class ParameterError(ValueError):
    """A caller-supplied parameter violates a documented precondition."""
