"""Exception types shared across the package."""


class CologneError(Exception):
    pass


class ParseError(CologneError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(CologneError, ValueError):
    """Argument outside the domain of an operation (negative weight, bad node id, ...)."""


class UsageError(CologneError, ValueError):
    """Incompatible arguments, e.g. merging summaries of different shapes."""


class ResourceError(CologneError, RuntimeError):
    """A brute-force oracle was asked to exceed its size guard."""
