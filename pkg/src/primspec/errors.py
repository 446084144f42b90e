"""Exception hierarchy.

Every error raised by the library derives from :class:`PrimSpecError`.  The
CLI maps :class:`InputError` subclasses to exit code 2 and
:class:`NumericalError` subclasses to exit code 3.
"""


class PrimSpecError(Exception):
    pass


class InputError(PrimSpecError):
    """Invalid user-supplied data (files, matrices, subsets)."""


class NumericalError(PrimSpecError):
    """A computation broke down; theory says this cannot happen on exact data."""


class NonStochastic(InputError):
    pass


class NonAbelian(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class OutOfRange(InputError):
    pass


class DegenerateBranch(InputError):
    pass


class NotSelfSupporting(InputError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class NotInvariant(InputError):
    pass


class NotKoopman(InputError):
    pass


class NotFixed(InputError):
    pass


class MultiGenerator(InputError):
    pass


class TooLarge(InputError):
    pass


class EmptyFamily(InputError):
    pass


class ProjectionUnavailable(PrimSpecError):
    pass


class NoErgodicInside(InputError):
    pass


class NotConverged(NumericalError):
    pass


class NonUniqueOnMinimalClass(NumericalError):
    pass


class DecompositionFailure(NumericalError):
    pass


class SingularSolve(NumericalError):
    pass


class NotConstantOnSupport(NumericalError):
    pass


class EquivalenceViolation(NumericalError):
    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []
