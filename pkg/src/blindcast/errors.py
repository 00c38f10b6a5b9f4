"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input: bad instance, graph, flag value, or file."""


class SizeLimitError(RuntimeError):
    """A configured cap (corpus size, graph size, prime table) was exceeded."""
