"""Exception hierarchy.

Two error families matter for the CLI exit-code contract: usage/configuration
errors (exit 1) and data errors raised by well-formed invocations over bad
inputs (exit 2).
"""
from __future__ import annotations


class GerchexError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GerchexError):
    """Invalid configuration, e.g. a cut-off radius below 1."""


class DataError(GerchexError):
    """Malformed or inconsistent input data (corpus, CSV, lexicon files)."""


class LexiconFormatError(DataError):
    """A lexicon file line that cannot be parsed; carries file and line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class StaleRevisionError(GerchexError):
    """Optimistic-concurrency violation on annotation save."""

    def __init__(self, stored_revision: int):
        super().__init__(
            f"stale save: stored revision is {stored_revision}, reload before saving"
        )
        self.stored_revision = stored_revision
