"""Shared error types, split by how callers are expected to react."""


class SchemaError(ValueError):
    """An input file or dict does not match its documented JSON shape."""


class PreconditionError(ValueError):
    """An operation was invoked on inputs that violate its stated contract."""
