"""Exception hierarchy shared by every module."""


class LindeloefError(Exception):
    """Base class for all library errors."""


class DomainError(LindeloefError, ValueError):
    pass


class PoleAtOne(DomainError):
    pass


class PoleAtNonpositiveInteger(DomainError):
    pass


class InvalidTolerance(DomainError):
    pass


class LengthMismatch(DomainError):
    pass


class InvalidSpec(DomainError):
    pass


class NonConvergence(LindeloefError, ArithmeticError):
    """The rigorous error bound could not reach the requested target."""


class TruncationTooLarge(NonConvergence):
    pass


class QuadratureNotConverged(NonConvergence):
    pass


class InsufficientBlocks(LindeloefError, ValueError):
    pass


class ReportIOError(LindeloefError, OSError):
    pass
