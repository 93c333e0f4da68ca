"""Exception hierarchy shared by every module of the workbench."""


class DynIdealError(Exception):
    """Base class for all errors raised by dynideal."""


class PreconditionError(DynIdealError, ValueError):
    """An operation was called outside its documented contract."""


class SizeMismatch(PreconditionError):
    pass


class GapMismatch(PreconditionError):
    pass


class UnknownInstance(DynIdealError, KeyError):
    pass


class KindMismatch(DynIdealError, TypeError):
    pass


class UnsupportedInstance(DynIdealError):
    pass


class Unbounded(PreconditionError):
    pass


class NotInIdeal(PreconditionError):
    pass


class CertificateInvalid(DynIdealError):
    pass


class InsufficientSpace(PreconditionError):
    pass


class BudgetExceeded(DynIdealError):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class NoSupportFound(DynIdealError):
    pass


class CoverFailed(DynIdealError):
    pass


class NotAbelian(UnsupportedInstance):
    pass


class NoWitness(DynIdealError):
    pass


class StrategyFault(DynIdealError):
    """A strategy produced an illegal move."""

    def __init__(self, player, round_index, reason):
        super().__init__(f"player {player} round {round_index}: {reason}")
        self.player = player
        self.round_index = round_index
        self.reason = reason


class NotAmalgamable(DynIdealError):
    pass


class AxiomViolation(PreconditionError):
    pass


class HostTooSmall(DynIdealError):
    pass


class ParseError(DynIdealError, ValueError):
    pass
