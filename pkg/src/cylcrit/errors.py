"""Exception hierarchy.

``ParameterError`` subclasses signal excluded or inconsistent inputs (CLI exit
code 2); ``NumericalError`` subclasses signal guards tripping during a
computation (CLI exit code 1).
"""


class CylcritError(Exception):
    pass


class ParameterError(CylcritError, ValueError):
    pass


class NumericalError(CylcritError, ArithmeticError):
    pass


# curve geometry
class NonMonotonicArcLength(ParameterError):
    pass


class TangentInconsistent(ParameterError):
    pass


class CurvatureInconsistent(ParameterError):
    pass


class StepTooLarge(ParameterError):
    pass


# parameter maps
class ExpRequiresNonzeroVarpi(ParameterError):
    pass


class AlphaExcluded(ParameterError):
    pass


class ParamsExcluded(ParameterError):
    pass


class ExponentDegenerate(ParameterError):
    pass


class MExcluded(ParameterError):
    pass


class DomainViolation(NumericalError):
    """Curvature (or height) left the domain where the Lagrangian is real."""


# solvers
class HeightVanished(NumericalError):
    pass


class StepFailure(NumericalError):
    pass


class ShootingDiverged(NumericalError):
    pass


# residuals / energies / stability
class HeightNonpositive(NumericalError):
    pass


class DegenerateFit(NumericalError):
    pass


class RequiresClosed(ParameterError):
    pass


class DivergentVolume(ParameterError):
    pass


class NonZeroBoundary(ParameterError):
    pass


class GridTooCoarse(ParameterError):
    pass


class BoundaryMismatch(ParameterError):
    pass


class HypothesisViolated(UserWarning):
    """Issued when a stability/minimizer hypothesis fails; results are still returned."""


class StationarityWarning(UserWarning):
    pass
