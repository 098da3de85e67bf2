"""Exception types raised across linklab."""


class LinkLabError(Exception):
    """Base class for all linklab errors."""


class InvalidMapError(LinkLabError, ValueError):
    """A permutation pair does not describe a connected planar map."""


class DomainError(LinkLabError, ValueError):
    """A counting formula was evaluated outside its domain."""


class SizeLimitError(LinkLabError, ValueError):
    """An exhaustive enumeration was requested above its configured cap."""


class EmptyTreeError(LinkLabError, ValueError):
    pass


class RejectionBudgetError(LinkLabError, RuntimeError):
    """The rejection sampler ran out of tries.

    ``attempts`` and ``accepted`` record what was observed before giving up.
    """

    def __init__(self, message, attempts=0, accepted=0):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted


class FeasibilityError(LinkLabError, ValueError):
    """The requested class/size is beyond what the rejection sampler can reach."""


class ClassificationError(LinkLabError, ValueError):
    """An invariant was requested for a diagram outside the class it is defined on."""


class TangleValidationError(LinkLabError, ValueError):
    """A bounded quadrangulation broke one of its invariants.

    ``violation`` carries the invariant's name.
    """

    def __init__(self, violation, message=None):
        super().__init__(message or violation)
        self.violation = violation


class PDFormatError(LinkLabError, ValueError):
    pass


class MissingDataError(LinkLabError, ValueError):
    pass
