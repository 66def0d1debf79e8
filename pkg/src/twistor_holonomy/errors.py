"""Exception hierarchy shared by every module."""


class HolonomyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HolonomyError, ArithmeticError):
    """An exact computation left the domain where it is defined (CLI exit 3)."""


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class NotInField(DomainError):
    """The requested value does not lie in Q(sqrt2, sqrt3, sqrt5)."""


class UnsupportedAngle(DomainError):
    """No exact cosine is available for this rational multiple of pi."""


class NotMonic(DomainError, ValueError):
    pass


class NotPrime(DomainError, ValueError):
    pass


class MixedRadicals(DomainError):
    """A quadratic coefficient involves more than one square root."""


class NotOnUnitCircle(DomainError):
    pass


class ExcludedCase(HolonomyError, ValueError):
    """The pair (pi, pi) is outside the domain of the independence check."""


class DegenerateAxis(HolonomyError, ValueError):
    """Rotation axis requested for the identity matrix."""


class UnrecognizedGroup(HolonomyError):
    """Element-order data does not match any finite subgroup of SO(3)."""


class SchurFailure(HolonomyError, ArithmeticError):
    pass


class NotUnit(HolonomyError, ValueError):
    pass


class TooFewPoints(HolonomyError, ValueError):
    pass
