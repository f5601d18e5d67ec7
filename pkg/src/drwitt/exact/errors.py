"""Exception types shared across the package."""


class DrwError(Exception):
    """Base class for all errors raised by drwitt."""


class NotDivisible(DrwError, ArithmeticError):
    pass


class ZeroDivisor(DrwError, ZeroDivisionError):
    pass


class NonInvertibleDivision(DrwError, ArithmeticError):
    pass


class NormalFormUnavailable(DrwError):
    pass


class UnsupportedCoefficientRing(DrwError):
    pass


class MismatchedWittParameters(DrwError, ValueError):
    pass


class LengthUnderflow(DrwError, ValueError):
    pass


class TooLargeForExhaustiveCheck(DrwError, ValueError):
    pass


class NotStabilized(DrwError):
    """Saturation did not stabilize within the depth schedule."""


class PrecisionExhausted(DrwError):
    pass


class InsufficientDepth(DrwError, ValueError):
    pass


class InsufficientFamily(DrwError, ValueError):
    pass


class UnsupportedPrime(DrwError, ValueError):
    pass


class NonUnitExponent(DrwError, ValueError):
    pass


class NotDVRModel(DrwError, ValueError):
    pass


class IsoFailure(DrwError):
    pass


class BasisMismatch(DrwError, ValueError):
    pass


class InvalidSteinbergPair(DrwError, ValueError):
    pass


class SymbolOutsideMonoid(DrwError, ValueError):
    pass


class ShapeMismatch(DrwError, ValueError):
    pass


class MissingDRWData(DrwError, ValueError):
    pass


class DegreeOverflow(DrwError, ValueError):
    pass
