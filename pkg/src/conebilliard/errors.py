"""Exception hierarchy shared by every module."""


class BilliardError(Exception):
    pass


class ShapeError(BilliardError):
    pass


class NonConvexSection(ShapeError):
    pass


class AxisNotInterior(ShapeError):
    pass


class NotOnSurface(BilliardError):
    pass


class TangentLine(BilliardError):
    pass


class VertexHit(BilliardError):
    pass


class RootFindFailure(BilliardError):
    pass


class NotReflectable(BilliardError):
    pass


class MaxReflectionsExceeded(BilliardError):
    """Raised when a trajectory is still reflecting after ``cap`` bounces.

    The partial trajectory is kept on ``self.trajectory`` so callers can
    report diagnostics.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class DegenerateStep(BilliardError):
    pass


class NotOnDelta0(BilliardError):
    pass


class OutsideClosedD(BilliardError):
    pass


class ConfigError(BilliardError):
    pass
