"""Exception types shared across the package."""


class PartcertError(Exception):
    """Base class for all package errors."""


class InvalidVertex(PartcertError):
    """A vertex id outside 0..n-1 was used."""


class SelfLoop(PartcertError):
    """An edge (v, v) was supplied."""


class ParseError(PartcertError):
    """Malformed graph6 / edge-list / JSON input."""


class InvalidParameters(PartcertError):
    """Arguments violate a documented precondition (divisibility, ranges)."""


class BudgetExhausted(PartcertError):
    """A Las-Vegas retry loop ran out of attempts.

    `failed_property` names the check that kept failing.
    """

    def __init__(self, message, failed_property=None):
        super().__init__(message)
        self.failed_property = failed_property


class NotDistinctive(PartcertError):
    """A builder needed a distinctive block that the system lacks."""


class NotTame(PartcertError):
    """A candidate partition block is wild with respect to the pool.

    `block` carries the offending block.
    """

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class InvalidCandidate(PartcertError):
    """A candidate partition has the wrong shape (block count, overlap...)."""


class HypothesisUnmet(PartcertError):
    """A witness finder was called on a graph violating its hypothesis."""
