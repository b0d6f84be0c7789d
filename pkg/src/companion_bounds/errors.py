"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class CompanionError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CompanionError, ValueError):
    """Malformed or non-finite input, bad indices, dimension mismatch."""


class DomainError(InvalidInputError):
    """Input is well formed but outside the region where a result is defined
    (e.g. complex or nonnegative roots for a simplex bound)."""


class ConfigurationError(InvalidInputError):
    """Inconsistent run settings, such as an RK4 step that is too stiff."""


class NumericalError(CompanionError, ArithmeticError):
    """A numerical routine failed or would be unreliable."""


class SingularityError(NumericalError):
    """Two roots are too close for a formula with poles at coinciding roots.

    ``pair`` holds the indices ``(i, j)`` of the offending roots.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
