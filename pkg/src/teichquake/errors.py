"""Exception hierarchy.  Everything derives from ``GeometryError`` (a ``ValueError``)."""


class GeometryError(ValueError):
    pass


class DegenerateTriple(GeometryError):
    pass


class OrientationMismatch(GeometryError):
    pass


class DegeneratePoints(GeometryError):
    pass


class NotOrientationPreserving(GeometryError):
    pass


class PointOnGeodesicEndpoint(GeometryError):
    pass


class InvalidBox(GeometryError):
    pass


class NotAtomic(GeometryError):
    pass


class NotALamination(GeometryError):
    pass


class EmptyFamily(GeometryError):
    pass


class SamplerBudgetExceeded(GeometryError):
    pass


class ContinuityViolation(GeometryError):
    """A piecewise map failed validation; ``piece`` is the offending index."""

    def __init__(self, message, piece=None):
        super().__init__(message)
        self.piece = piece


class BoxNotAligned(GeometryError):
    pass


class NonGenericBox(GeometryError):
    pass


class ConfigurationUnclassified(GeometryError):
    pass
