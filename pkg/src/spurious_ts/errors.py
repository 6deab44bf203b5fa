"""Exception hierarchy.

Two families: ``InputError`` for data that cannot be used as given (exit
code 2 at the command line) and ``NumericalError`` for well-formed data on
which a computation cannot proceed (exit code 3).
"""


class SpuriousTSError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(SpuriousTSError, ValueError):
    pass


class NumericalError(SpuriousTSError, ArithmeticError):
    pass


# -- input problems ---------------------------------------------------------

class InvalidSeries(InputError):
    pass


class OrderTooLarge(InputError):
    pass


class LagTooLarge(InputError):
    pass


class NoOverlap(InputError):
    pass


class InsufficientObservations(InputError):
    pass


class LengthMismatch(InputError):
    pass


class UnknownPredictor(InputError, KeyError):
    pass


class MalformedRow(InputError):
    pass


class DuplicateYear(InputError):
    pass


class GapInYears(InputError):
    pass


class EmptyFile(InputError):
    pass


# -- numerical problems -----------------------------------------------------

class DegenerateSeries(NumericalError):
    """A sequence has zero variance where variation is required."""


class ZeroResiduals(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class InvalidParameters(NumericalError):
    """AR or MA polynomial has a root on or inside the unit circle."""
