"""Exception hierarchy shared by all finspace modules."""


class FinSpaceError(Exception):
    """Base class for every error raised by finspace."""


class CycleDetected(FinSpaceError):
    """The reflexive-transitive closure of the relations is not antisymmetric."""


class UnknownLabel(FinSpaceError):
    pass


class DuplicateLabel(FinSpaceError):
    pass


class DomainMismatch(FinSpaceError):
    """A point map references elements outside its domain or codomain."""


class CodomainTooLarge(FinSpaceError):
    pass


class EmptySpace(FinSpaceError):
    pass


class NotAHasseEdge(FinSpaceError):
    pass


class NotSurjective(FinSpaceError):
    pass


class NotContinuous(FinSpaceError):
    pass


class NotMonotone(FinSpaceError):
    """Raised by decompose; ``witness`` names the offending fiber or relation pair."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class DiscreteFiberViolation(FinSpaceError):
    pass


class OverflowDetected(FinSpaceError):
    pass


class SimplexBudgetExceeded(FinSpaceError):
    pass


class SweepTooLarge(FinSpaceError):
    pass


class ParseError(FinSpaceError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
