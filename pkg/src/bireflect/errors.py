"""Exception types shared across the package."""


class BireflectError(Exception):
    """Base class for all errors raised by this package."""


class FieldError(BireflectError):
    pass


class EvenCharacteristic(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class SquareD(FieldError):
    pass


class NotAnExtensionElement(FieldError):
    pass


class ZeroInput(FieldError):
    pass


class FieldMismatch(BireflectError):
    pass


class DivisionByZeroPoly(BireflectError, ZeroDivisionError):
    pass


class ZeroConstantTerm(BireflectError):
    pass


class NonMonic(BireflectError):
    pass


class ShapeMismatch(BireflectError):
    pass


class Singular(BireflectError):
    pass


class NotSquareMatrix(ShapeMismatch):
    pass


class NotCyclic(BireflectError):
    pass


class DetUnadjustable(BireflectError):
    """No n-th root of the determinant exists; the GL factorization is attached."""

    def __init__(self, msg, factorization=None):
        super().__init__(msg)
        self.factorization = factorization


class OddSymplecticDim(BireflectError):
    pass


class Unenumerable(BireflectError):
    pass


class BoundExceeded(Unenumerable):
    pass


class InfiniteField(Unenumerable):
    pass


class NotReal(BireflectError):
    pass


class DeterminantUnachievable(BireflectError):
    pass


class DetNotOne(BireflectError):
    pass


class NotInGroup(BireflectError):
    pass


class NotMember(NotInGroup):
    pass


class NotSemisimple(BireflectError):
    pass


class TargetUnreachable(BireflectError):
    pass


class NotDiagonalizableOverK(BireflectError):
    pass


class NotInvertible(BireflectError):
    pass


class NotAutomorphism(BireflectError):
    pass
