"""Exception hierarchy shared by every module of the package."""


class BerkDynError(Exception):
    """Base class for all errors raised by berkdyn."""


class InsufficientPrecision(BerkDynError):
    pass


class SeriesDivisionByZero(BerkDynError, ZeroDivisionError):
    pass


class NotIntegral(BerkDynError):
    pass


class UnsupportedPointType(BerkDynError):
    pass


class SamePoint(BerkDynError):
    pass


class InvalidFamily(BerkDynError):
    pass


class PrecisionExceeded(BerkDynError):
    pass


class CellMismatch(BerkDynError):
    pass


class NotNested(BerkDynError):
    pass


class NotAdmissible(BerkDynError):
    """Raised when a pair of measures violates the admissibility condition.

    ``branch`` is ``"annulus"`` when the inequality for distinct skeleta
    fails and ``"pullback"`` when the equality for coinciding skeleta fails.
    """

    def __init__(self, branch: str, message: str = ""):
        super().__init__(message or f"admissibility violated ({branch} branch)")
        self.branch = branch


class BoundViolated(BerkDynError):
    pass


class NotCaseII(BerkDynError):
    pass


class NotStationary(BerkDynError):
    pass


class HypothesisViolated(BerkDynError):
    """The Gauss point is totally invariant, so the limit theorem does not apply."""


class ExceptionalBase(BerkDynError):
    pass


class Undetermined(BerkDynError):
    pass


class DegreeDropped(BerkDynError):
    pass


class RootSolveFailure(BerkDynError):
    pass


class AtomsTooClose(BerkDynError):
    pass


class ParseError(BerkDynError):
    def __init__(self, message: str, position: int | None = None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(message + where)
        self.position = position


class DegreeMismatch(BerkDynError):
    pass
