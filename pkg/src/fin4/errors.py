"""Exception hierarchy.

Every domain error carries its documented name as the class name, so the
CLI can report ``type(err).__name__`` verbatim.
"""


class Fin4Error(Exception):
    """Base class for all domain errors raised by the engine."""


# ledger
class UnknownToken(Fin4Error):
    pass


class NonTransferable(Fin4Error):
    pass


class InsufficientBalance(Fin4Error):
    pass


class SupplyCapExceeded(Fin4Error):
    pass


class NotBurnable(Fin4Error):
    pass


class BalanceOverflow(Fin4Error):
    pass


class ZeroTicks(Fin4Error):
    pass


class InvalidAccount(Fin4Error):
    pass


class CorruptLog(Fin4Error):
    def __init__(self, seq, detail=""):
        self.seq = seq
        super().__init__(f"first bad record at seq {seq}" + (f": {detail}" if detail else ""))


# token factory
class InvalidDesign(Fin4Error):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(", ".join(self.violations))


# claims
class UnknownClaim(Fin4Error):
    pass


class TokenNotClaimable(Fin4Error):
    pass


class InvalidQuantity(Fin4Error):
    pass


class ClaimClosed(Fin4Error):
    pass


class IndexOutOfRange(Fin4Error):
    pass


class PayloadMismatch(Fin4Error):
    pass


class BadOracleSignature(Fin4Error):
    pass


class UnauthorizedAttestor(Fin4Error):
    pass


class DuplicateAttestation(Fin4Error):
    pass


class NotAllApproved(Fin4Error):
    pass


# curation
class InsufficientGov(Fin4Error):
    pass


class ListingExists(Fin4Error):
    pass


class WrongKind(Fin4Error):
    pass


class NoActiveListing(Fin4Error):
    pass


class AlreadyChallenged(Fin4Error):
    pass


class UnknownPoll(Fin4Error):
    pass


class CommitClosed(Fin4Error):
    pass


class DuplicateCommit(Fin4Error):
    pass


class ZeroStake(Fin4Error):
    pass


class RevealClosed(Fin4Error):
    pass


class RevealTooEarly(Fin4Error):
    pass


class HashMismatch(Fin4Error):
    pass


class NoCommit(Fin4Error):
    pass


class DuplicateReveal(Fin4Error):
    pass


class PollNotEnded(Fin4Error):
    pass


class AlreadyResolved(Fin4Error):
    pass


# reputation / governance
class NoSuchDelegation(Fin4Error):
    pass


class DelegationLocked(Fin4Error):
    pass


# value backing
class NoSwapPool(Fin4Error):
    pass


class EmptyPool(Fin4Error):
    pass


class NoMintConversion(Fin4Error):
    pass


class NoCoupledBurn(Fin4Error):
    pass


class InsufficientCoupledBalance(Fin4Error):
    pass


# simulation
class InvalidConfig(Fin4Error):
    def __init__(self, path, detail):
        self.path = path
        super().__init__(f"{path}: {detail}")
