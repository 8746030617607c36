"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for every error raised by this library."""


class IncompatibleFields(AlgebraError):
    """Two values live in fields that do not embed into one another."""


class UnsupportedOperation(AlgebraError):
    """Operation undefined for this field kind (e.g. Frobenius over Q)."""


class DivideByZero(AlgebraError, ZeroDivisionError):
    pass


class PolySyntaxError(AlgebraError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbol(PolySyntaxError):
    pass


class InvalidModulus(AlgebraError):
    pass


class InvalidBound(AlgebraError):
    pass


class InvalidCap(AlgebraError):
    pass


class InvalidParams(AlgebraError):
    pass


class ExtensionCapExceeded(AlgebraError):
    def __init__(self, needed, cap):
        super().__init__(f"required extension degree {needed} exceeds cap {cap}")
        self.needed = needed
        self.cap = cap


class UnsupportedAlgebraicExtension(AlgebraError):
    """A fiber over Q left the rationals; number fields are out of scope."""


class NotCompatible(AlgebraError):
    """A point set is not a union of fibers of both polynomials."""


class NotConsistent(AlgebraError):
    """A labeling violates the multiplicity-ratio constraints."""


class InvalidCycle(AlgebraError):
    pass


class InseparableInput(AlgebraError):
    """The derivative criterion needs inputs with nonzero derivative."""
