"""Exception types shared across the package."""


class SituskitError(Exception):
    pass


class DomainError(SituskitError, ValueError):
    """Arguments outside the domain of an operation (carrier mismatch and the like)."""


class ValidationError(SituskitError):
    """A constructed object violates a structural invariant."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class DepthError(SituskitError, ValueError):
    pass


class ResourceError(SituskitError):
    """A size guard refused the computation; ``bound`` names the limit hit."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class PreconditionError(SituskitError, ValueError):
    pass


class ParseError(SituskitError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
        self.line = line
        self.column = column
