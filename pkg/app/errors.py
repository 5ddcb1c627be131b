from typing import Optional


class LatticeError(ValueError):
    """Base class for every validation failure raised by the library."""


class NotSymmetric(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


class EmptyInput(LatticeError):
    pass


class NonPositiveQ(LatticeError):
    pass


class NonPositiveChi(LatticeError):
    pass


class NegativeGenus(LatticeError):
    pass


class BadExponent(LatticeError):
    pass


class NotARoot(LatticeError):
    pass


class NotAnIsometry(LatticeError):
    pass


class DegenerateForm(LatticeError):
    pass


class NotSymplectic(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class RootFindFailure(LatticeError):
    pass


class ParseError(LatticeError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
