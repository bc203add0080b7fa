class NevpickError(Exception):
    """Base class for library errors."""


class PoleAtPoint(NevpickError, ZeroDivisionError):
    pass


class LevelOutOfRange(NevpickError, ValueError):
    pass


class BadParams(NevpickError, ValueError):
    pass


class IllConditioned(NevpickError):
    pass


class Divergence(NevpickError):
    pass


class NotStrictlySolvable(NevpickError):
    pass


class StepBlowup(NevpickError):
    pass


class BadWeight(NevpickError, ValueError):
    pass


class ResolutionExceeded(NevpickError):
    pass


class QuadratureNonConvergent(NevpickError):
    pass


class NonIntegrableDeclaration(NevpickError, ValueError):
    pass


class GridTooCoarse(NevpickError):
    pass


class ContourOpen(NevpickError):
    pass
