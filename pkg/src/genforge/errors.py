"""Exception types shared across the toolkit.

Everything derives from ValueError so callers can catch one family; the CLI
maps any of these to exit code 1 (domain error) as opposed to 2 (usage error).
"""


class GenforgeError(ValueError):
    """Base class for all domain errors raised by this package."""


class ParseError(GenforgeError):
    """A record or config line could not be parsed."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
        if line is not None:
            loc = f"{loc}{line}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.path = path
        self.line = line


class EmptyDatasetError(GenforgeError):
    """A dataset file or split contained no records."""


class ValidationError(GenforgeError):
    """Structurally valid input violated an invariant (duplicate ids, ...)."""


class ConfigError(GenforgeError):
    """Unknown key, unknown metric name, or malformed configuration value."""


class UndefinedMetricError(GenforgeError):
    """The metric has no defined value on this input (e.g. no n-grams at all)."""


class AlignmentError(GenforgeError):
    """Two result sets that must share ids or metric names do not."""


class IntegrityError(GenforgeError):
    """A corruption pair is internally inconsistent (tampered or truncated)."""


class SearchSizeError(GenforgeError):
    """Exhaustive enumeration was refused because the space is too large."""


class StageError(GenforgeError):
    """A pipeline stage failed inside the experiment harness."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
