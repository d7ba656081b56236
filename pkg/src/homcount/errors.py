"""Shared exception types; the CLI maps them to exit codes."""


class HomcountError(Exception):
    pass


class SignatureMismatchError(HomcountError):
    """Two structures fed to a binary operation carry different signatures."""


class CapExceededError(HomcountError):
    """A configured size or enumeration cap was exceeded.

    `count` carries the size reached when it is known.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class ParseError(HomcountError):
    """Text-format violation; `line` is the 1-based offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvariantViolationError(HomcountError):
    """An internal theorem-check failed; this signals an implementation bug."""
