"""Exception hierarchy shared by all sectionrep modules.

``InputError`` subclasses signal bad input data (CLI exit code 2);
``NumericalFailure`` signals that a floating point routine did not deliver a
trustworthy answer (CLI exit code 1).
"""


class SectionRepError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SectionRepError):
    """Invalid input data or contract violation by the caller."""


class UnsupportedSeries(InputError):
    pass


class RankTooLarge(InputError):
    pass


class NonIntegralWeight(InputError):
    pass


class NotDominant(InputError):
    pass


class DimensionCap(InputError):
    pass


class PointCollision(InputError):
    pass


class EmptyKernel(InputError):
    pass


class NonScalarAction(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotUnit(InputError):
    pass


class DuplicateSite(InputError):
    pass


class UnboundedRule(InputError):
    pass


class GridTooCoarse(InputError):
    pass


class OrderViolation(InputError):
    pass


class NotMultiplicative(InputError):
    pass


class InconsistentDegree(InputError):
    pass


class NonIntegerExponent(InputError):
    pass


class SchemaError(InputError):
    """JSON input does not match the documented schema."""


class NumericalFailure(SectionRepError):
    """A floating point solve (Cholesky, eigen, SVD) failed to converge."""
