class QShuffleError(Exception):
    """Base class for errors raised by qshuffle."""
    pass


class UsageError(QShuffleError, ValueError):
    """Raised if a spin, degree, check name or variable is invalid."""
    pass


class RadicalError(QShuffleError, ValueError):
    """Raised if a square root falls outside products of q-brackets."""
    pass


class GradingError(QShuffleError, AssertionError):
    """Raised if a graded series breaks the word length = degree invariant,
    or a truncated product is requested on an operand with negative degrees."""
    pass
