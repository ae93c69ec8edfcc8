"""Exception hierarchy.

Every failure raised by the library derives from :class:`QFError`.  The CLI
maps :class:`ParseError` to exit status 1, :class:`SearchExhausted` to 3 and
every other :class:`QFError` to 2.
"""


class QFError(Exception):
    """Base class for all library errors."""


class PreconditionError(QFError, ValueError):
    """An operation was called outside its domain."""


class ZeroInput(PreconditionError):
    pass


class NotPrime(PreconditionError):
    pass


class NotCoprime(PreconditionError):
    pass


class IsSquare(PreconditionError):
    pass


class ZeroScalar(PreconditionError):
    pass


class EmptyResult(PreconditionError):
    pass


class DimensionTooSmall(PreconditionError):
    pass


class DimensionExceeded(PreconditionError):
    pass


class DimensionOrder(PreconditionError):
    pass


class EvenDimension(PreconditionError):
    pass


class InvalidProfile(PreconditionError):
    pass


class HypothesesViolated(PreconditionError):
    pass


class NotApplicable(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class NotAdmissible(PreconditionError):
    pass


class NotComparable(PreconditionError):
    pass


class ParityViolation(PreconditionError):
    pass


class SearchExhausted(QFError):
    """A bounded search ran past its limit.

    The objects searched for exist in theory; the bound is a guard only.
    """


class VerificationFailed(QFError):
    """A constructed object failed its own recomputation check."""


class ParseError(QFError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
