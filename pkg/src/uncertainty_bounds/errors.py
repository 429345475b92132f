"""Exception hierarchy shared by every module.

Each class maps to one failure mode of the numerical contracts; the CLI turns
them into exit codes (see ``EXIT_CODES``).
"""


class UncertaintyError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(UncertaintyError, ValueError):
    pass


class NotHermitian(UncertaintyError, ValueError):
    pass


class NotNormalized(UncertaintyError, ValueError):
    pass


class DegenerateVariance(UncertaintyError, ValueError):
    """A standard deviation that appears in a denominator is (numerically) zero."""


class SingularDenominator(UncertaintyError, ValueError):
    pass


class NotOrthogonal(UncertaintyError, ValueError):
    pass


class ParallelStates(UncertaintyError, ValueError):
    pass


class ZeroVector(UncertaintyError, ValueError):
    pass


class TooFewVectors(UncertaintyError, ValueError):
    pass


class EmptyInput(UncertaintyError, ValueError):
    pass


class CutoffTooSmall(UncertaintyError, ValueError):
    pass


class ConfigError(UncertaintyError, ValueError):
    """Malformed user configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class NumericalError(UncertaintyError, ArithmeticError):
    """Roundoff exceeded a documented tolerance (a logic error, not noise)."""


EXIT_CODES = {
    ConfigError: 2,
    CutoffTooSmall: 2,
    DimensionMismatch: 2,
    NotHermitian: 2,
    NotNormalized: 2,
    EmptyInput: 2,
    TooFewVectors: 2,
    DegenerateVariance: 3,
    SingularDenominator: 3,
    ZeroVector: 3,
    NotOrthogonal: 4,
    ParallelStates: 4,
    NumericalError: 5,
}


def exit_code_for(exc):
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]
    return 5
