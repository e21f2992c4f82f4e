"""Exception hierarchy shared across the package.

The CLI maps these classes to distinct exit codes (input 2, config 3,
everything else 4), so new exceptions should subclass one of the branches
below rather than raising bare ValueError/RuntimeError.
"""


class EmopaletteError(Exception):
    """Base class for all package errors."""


class InputError(EmopaletteError):
    """Unreadable or malformed user input (images, annotation files, trials)."""


class ConfigError(EmopaletteError):
    """Invalid configuration artifact (partitions, mapping table, KB schema)."""


class FingerprintError(ConfigError):
    """A knowledge base was built under a different color configuration."""

    def __init__(self, expected: str, got: str):
        super().__init__(
            f"knowledge base fingerprint {got!r} does not match the active "
            f"configuration {expected!r}; rebuild the KB or load the matching config"
        )
        self.expected = expected
        self.got = got


class DomainError(EmopaletteError, ValueError):
    """A numeric argument fell outside its declared domain."""


class QueryError(EmopaletteError):
    """Unparseable retrieval query; carries the offending token."""

    def __init__(self, token: str, reason: str):
        super().__init__(f"bad query token {token!r}: {reason}")
        self.token = token


class AnalysisError(EmopaletteError):
    """Precondition failure in the 2AFC analysis pipeline."""


class FitError(AnalysisError):
    """Psychometric curve fit did not converge; carries last residuals."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class BuildError(EmopaletteError):
    """Knowledge-base construction could not proceed (e.g. every image failed)."""
