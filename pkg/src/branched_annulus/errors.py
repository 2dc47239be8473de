"""Exception hierarchy.

Three families map onto the CLI exit codes: malformed input (1),
repeated roots (2) and numerical aborts (3).
"""


class BranchedAnnulusError(Exception):
    """Base class for every error raised by this package."""


class InputError(BranchedAnnulusError, ValueError):
    pass


class ZeroLeadingCoefficient(InputError):
    pass


class DegreeTooSmall(InputError):
    pass


class ZeroInput(InputError):
    pass


class EmptyCriticalValues(InputError):
    pass


class ZeroCriticalValue(InputError):
    pass


class LabelMismatch(InputError):
    pass


class MissingTraces(InputError):
    pass


class RepeatedRootsError(BranchedAnnulusError):
    """The polynomial does not have distinct roots."""


class NumericalError(BranchedAnnulusError, ArithmeticError):
    """A numerical stage failed; results are not trustworthy."""


class NoConvergence(NumericalError):
    pass


class PathTooCloseToCriticalValue(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class EndpointMatchAmbiguous(NumericalError):
    pass


class InfinityIndexUnstable(NumericalError):
    pass


class DescentStalled(NumericalError):
    pass


class PointTooCloseToCurve(NumericalError):
    pass


class WindingInconsistent(NumericalError):
    pass


class ChainNotMonotone(NumericalError):
    pass


class ProductNotDCycle(NumericalError):
    pass


class CompatibilityViolation(NumericalError):
    pass


class CycleTypeMismatch(NumericalError):
    pass


class TransitivityFailure(NumericalError):
    pass


class UnroutablePath(NumericalError):
    pass
