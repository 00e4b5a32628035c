"""Exception types shared by the index builders, the container format and the CLI."""

from __future__ import annotations


class IndexFormatError(ValueError):
    """An index file is malformed, truncated or written by another format version."""


class SelfCheckError(AssertionError):
    """An internal consistency check failed; the structure must not be used."""
