"""Shared exception types."""


class EarshotError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(EarshotError):
    """Unreadable or structurally invalid corpus input."""


class GlossaryError(EarshotError):
    """Invalid glossary file (bad schema, duplicate roots, ...)."""


class ConfigError(EarshotError):
    """Invalid run configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class EndpointError(EarshotError):
    """A model endpoint failed after exhausting retries."""


class VectorStoreError(EarshotError):
    """Vector index construction or query failure."""
