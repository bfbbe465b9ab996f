"""Exception hierarchy shared by every module."""


class QLagError(Exception):
    """Base class for all errors raised by qlaguerre."""


class ArithmeticOverflowError(QLagError, OverflowError):
    """A coefficient left the signed 64-bit range."""


class LimitExceededError(QLagError, ValueError):
    """A size parameter is above the configured enumeration limit."""


class UnmatchedVertexError(QLagError, ValueError):
    pass


class OutOfRangeError(QLagError, ValueError):
    pass


class TableTooShortError(QLagError, ValueError):
    """The moment table does not reach the x-degree of the polynomial."""


class InhomogeneousEdgeError(QLagError, ValueError):
    pass


class NegativeExponentError(QLagError, ArithmeticError):
    """A statistic that must be a nonnegative exponent came out negative."""


class InternalInconsistencyError(QLagError, RuntimeError):
    """An invariant that the construction guarantees was found broken."""
