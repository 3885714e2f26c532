"""Exception hierarchy shared by every module."""


class BlobError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class BadParams(BlobError):
    pass


class AdjacencyViolation(BlobError):
    def __init__(self, condition: str, detail: str):
        super().__init__(f"condition ({condition}) fails: {detail}")
        self.condition = condition


class SizeMismatch(BlobError):
    pass


class ShapeMismatch(BlobError):
    pass


class NotPeriodic(BlobError):
    pass


class BadPrefix(BlobError):
    pass


class ClassTooLarge(BlobError):
    pass


class InternalInconsistency(BlobError):
    pass


class UnknownIdentity(BlobError):
    pass


class NonTermination(BlobError):
    """Step budget exhausted inside the rewriting loop."""

    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


class BudgetExhausted(BlobError):
    pass


class AssociativityFailure(BlobError):
    pass
