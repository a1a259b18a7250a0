"""Exception hierarchy.

Every error carries its class name as the diagnostic tag used in reports and
CLI output, so ``type(err).__name__`` is stable API.
"""


class LeonardLabError(Exception):
    """Base class for all package errors."""


class DivisionByZero(LeonardLabError, ZeroDivisionError):
    pass


class FieldMismatch(LeonardLabError, TypeError):
    pass


class InvalidFieldSpec(LeonardLabError, ValueError):
    pass


class ParseError(LeonardLabError, ValueError):
    pass


class DimensionTooLarge(LeonardLabError, ValueError):
    pass


class NotAnEigenvalue(LeonardLabError):
    pass


class DegenerateEigenspace(LeonardLabError):
    pass


class SingularBasisMatrix(LeonardLabError):
    pass


class InvalidParameterArray(LeonardLabError, ValueError):
    pass


class EigenvaluesNotDistinct(LeonardLabError):
    pass


class SpectrumNotInField(LeonardLabError):
    """The characteristic polynomial does not split into d+1 roots in the field."""


class NotTridiagonalizable(LeonardLabError):
    pass


class SplitBasisDegenerate(LeonardLabError):
    pass


class NotUpperBidiagonal(LeonardLabError):
    pass


class FieldTooSmall(LeonardLabError, ValueError):
    pass


class NotEnoughTerms(LeonardLabError, ValueError):
    pass


class RatioInconsistent(LeonardLabError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"ratio differs at i={index}")


class EvenIndexUnsupported(LeonardLabError, ValueError):
    pass


class BracketVanished(LeonardLabError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"[{index}]_q vanished")


class EvenD(LeonardLabError, ValueError):
    pass


class OddD(LeonardLabError, ValueError):
    pass


class NotALeonardPair(LeonardLabError):
    pass
