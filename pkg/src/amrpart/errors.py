"""Exception types shared across the package."""


class AmrPartError(Exception):
    """Base class for all errors raised by amrpart."""


class InvalidArgumentError(AmrPartError, ValueError):
    pass


class NotFoundError(AmrPartError, LookupError):
    pass


class ValidationError(AmrPartError, ValueError):
    pass


class MeshParseError(ValidationError):
    """Malformed record in a mesh file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DegenerateSplitError(AmrPartError):
    """A bisection step was left with parts to assign but no cells."""


class UndefinedMetricError(AmrPartError, ValueError):
    pass
