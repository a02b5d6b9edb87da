"""Exception hierarchy shared by every module."""


class GeometryError(ValueError):
    """Base class for invalid geometric input or unsupported requests."""


class DimensionMismatch(GeometryError):
    pass


class NonpositiveOffset(GeometryError):
    pass


class UnboundedBody(GeometryError):
    pass


class DegenerateBody(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class UnsupportedDimension(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class EmptySection(GeometryError):
    pass


class NotSymmetric(GeometryError):
    pass


class InvalidLambda(GeometryError):
    pass


class InvalidP(GeometryError):
    pass


class NonpositiveFactor(GeometryError):
    pass


class NonIntegrable(GeometryError):
    pass


class NotATriangle(GeometryError):
    pass


class CentroidNotOrigin(GeometryError):
    pass


class NumericalFailure(ArithmeticError):
    """A stochastic or iterative computation could not meet its error budget."""


class IllConditionedFit(NumericalFailure):
    pass


class SingularCovariance(NumericalFailure):
    pass


class NotIsotropic(NumericalFailure):
    pass


class AcceptanceTooLow(NumericalFailure):
    pass
