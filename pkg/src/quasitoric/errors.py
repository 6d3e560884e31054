"""Exception hierarchy shared by every module."""


class QuasitoricError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndexSet(QuasitoricError, ValueError):
    pass


class DimensionMismatch(QuasitoricError, ValueError):
    pass


class InvalidSplit(QuasitoricError, ValueError):
    pass


class ConditionFailed(QuasitoricError):
    """A cTFP factorization was requested along a split that is not one."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDoublyChordal(QuasitoricError):
    """The 2-way model does not have rational MLE."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTreeError(QuasitoricError):
    pass


class NonTerminatingRecursion(QuasitoricError):
    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices


class ConstructionError(QuasitoricError):
    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class DecompositionInvariantFailure(QuasitoricError):
    def __init__(self, message, step=None, item=None):
        super().__init__(message)
        self.step = step
        self.item = item


class TheoremViolation(QuasitoricError):
    """A verification tripwire fired: a combinatorial answer disagrees with brute force."""


class DisconnectedGraph(QuasitoricError):
    pass
