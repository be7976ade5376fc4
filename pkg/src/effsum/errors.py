"""Exception hierarchy shared by every module."""


class EffsumError(Exception):
    """Base class for all library errors."""


class CarrierMismatch(EffsumError, ValueError):
    """An element does not belong to the carrier it is used with."""


class EmptyOperand(EffsumError, ValueError):
    pass


class PreconditionError(EffsumError, ValueError):
    pass


class NotApplicable(EffsumError):
    """A procedure's hypotheses do not hold on the given data."""


class ChainOverflow(NotApplicable):
    """A domination chain ran longer than the set it lives in.

    Only possible when strict dominance has a cycle, i.e. the relation is
    not transitive on the set.
    """


class MalformedSystem(EffsumError, ValueError):
    pass


class IndexOutOfRange(EffsumError, IndexError):
    pass


class ParseError(EffsumError, ValueError):
    pass


class ValidationError(EffsumError, ValueError):
    pass


class InvalidSizes(EffsumError, ValueError):
    pass
