"""Exception hierarchy.

Every error raised by the library derives from :class:`SemiAssignError`.
Input-validation errors also derive from :class:`ValueError` so callers that
only care about bad input can catch the builtin.
"""


class SemiAssignError(Exception):
    """Base class for all library errors."""


class EmptyProblem(SemiAssignError, ValueError):
    pass


class CapacityMismatch(SemiAssignError, ValueError):
    pass


class InvalidEntry(SemiAssignError, ValueError):
    pass


class DimensionMismatch(SemiAssignError, ValueError):
    pass


class NotPerfect(SemiAssignError, ValueError):
    pass


class InvalidOptions(SemiAssignError, ValueError):
    pass


class InvalidParams(SemiAssignError, ValueError):
    pass


class Stalled(SemiAssignError, RuntimeError):
    """The dual update found no finite step; the search state is corrupt."""


class NotConverged(SemiAssignError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TooLarge(SemiAssignError, ValueError):
    pass


class InvalidP(SemiAssignError, ValueError):
    pass


class EmptySamples(SemiAssignError, ValueError):
    pass


class MassMismatch(SemiAssignError, ValueError):
    pass


class MapMismatch(SemiAssignError, ValueError):
    pass


class TooFewPlayers(SemiAssignError, ValueError):
    pass


class NegativePayoff(SemiAssignError, ValueError):
    pass


class Infeasible(SemiAssignError, ValueError):
    pass


class InsufficientData(SemiAssignError, ValueError):
    pass


class SolverDisagreement(SemiAssignError, RuntimeError):
    pass
