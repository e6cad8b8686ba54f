"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failure classes to
process exit statuses without a lookup table of its own.
"""


class EuclidMinError(Exception):
    exit_code = 1


class InvalidInput(EuclidMinError, ValueError):
    exit_code = 2


class DegreeZero(InvalidInput):
    pass


class NonMonic(InvalidInput):
    pass


class NotSquarefree(InvalidInput):
    pass


class InvalidA(InvalidInput):
    pass


class SignatureTotallyReal(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroVector(InvalidInput):
    pass


class CheckFailed(EuclidMinError):
    exit_code = 3


class PrecisionExhausted(EuclidMinError, ArithmeticError):
    exit_code = 4


class SearchSpaceTooLarge(EuclidMinError):
    exit_code = 5
