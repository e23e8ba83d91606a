"""REP (non-transferable reputation) and GOV (governance) tokens.

REP is minted by token creation and approved claims and never moves.  GOV is
minted only through :meth:`claim_gov`; it can be delegated, and delegated
units count toward the delegate's *effective* GOV::

    effective = owned + received - given - locked

Locks (TCR deposits and vote stakes) are bookkeeping on top of balances, so
``sum(effective) + sum(locked) == total GOV supply`` holds at every step.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .codec import variant
from .ledger import GOV, REP, check_account, command


@variant()
class RepConfig:
    rep_per_creation: int = 100
    rep_per_claim: int = 10
    gov_threshold: int = 100
    gov_per_level: int = 10

    def violations(self) -> list[str]:
        return [name for name in ("rep_per_creation", "rep_per_claim", "gov_threshold", "gov_per_level")
                if type(getattr(self, name)) is not int or getattr(self, name) < 1]


@dataclass(frozen=True)
class GovDelegation:
    delegator: str
    delegate: str
    amount: int

    @property
    def active(self) -> bool:
        return self.amount > 0


def gov_entitlement(rep: int, config: RepConfig) -> int:
    return rep // config.gov_threshold * config.gov_per_level


class ReputationOps:
    """REP awards, GOV claiming, delegation and locks.  Mixed into ``Engine``."""

    def _award_rep(self, account: str, reason: str) -> int:
        cfg = self.config.rep
        amount = cfg.rep_per_creation if reason == "TokenCreated" else cfg.rep_per_claim
        self._mint(REP, account, amount)
        self._emit("RepAwarded", account=account, reason=reason, amount=amount)
        return self.balance_of(REP, account)

    def rep_of(self, account: str) -> int:
        return self.balance_of(REP, account)

    def gov_claimed(self, account: str) -> int:
        return self.state.gov_claimed.get(account, 0)

    def claimable_gov(self, account: str) -> int:
        due = gov_entitlement(self.rep_of(account), self.config.rep) - self.gov_claimed(account)
        return max(due, 0)

    @command("ClaimGov")
    def claim_gov(self, account: str) -> int:
        check_account(account)
        due = self.claimable_gov(account)
        if due:
            self._mint(GOV, account, due)
            self.state.gov_claimed[account] = self.gov_claimed(account) + due
        return due

    # -- effective balances ---------------------------------------------------

    def gov_given(self, account: str) -> int:
        return self.state.gov_given.get(account, 0)

    def gov_received(self, account: str) -> int:
        return self.state.gov_received.get(account, 0)

    def locked_gov(self, account: str) -> int:
        return self.state.gov_locked.get(account, 0)

    def effective_gov(self, account: str) -> int:
        return (self.balance_of(GOV, account) + self.gov_received(account)
                - self.gov_given(account) - self.locked_gov(account))

    def delegations(self) -> list[GovDelegation]:
        return [GovDelegation(a, b, n) for (a, b), n in sorted(self.state.delegations.items())]

    def _own_free(self, account: str) -> int:
        return self.balance_of(GOV, account) - self.gov_given(account)

    def _check_gov_spendable(self, account: str, amount: int) -> None:
        if min(self._own_free(account), self.effective_gov(account)) < amount:
            raise errors.InsufficientGov(f"{account[:12]}.. cannot spend {amount} GOV")

    def _lock_gov(self, account: str, amount: int) -> None:
        if self.effective_gov(account) < amount:
            raise errors.InsufficientGov(
                f"{account[:12]}.. has {self.effective_gov(account)} effective GOV, needs {amount}")
        if amount:
            self.state.gov_locked[account] = self.locked_gov(account) + amount
            self._emit("GovLocked", account=account, amount=amount)

    def _unlock_gov(self, account: str, amount: int) -> None:
        if not amount:
            return
        left = self.locked_gov(account) - amount
        assert left >= 0, "unlocking more GOV than locked"
        if left:
            self.state.gov_locked[account] = left
        else:
            del self.state.gov_locked[account]
        self._emit("GovUnlocked", account=account, amount=amount)

    def _forfeit_gov(self, account: str, amount: int, sink: str) -> None:
        """Unlock ``amount`` held by ``account`` and move it to ``sink``.

        Paid from the account's own undelegated GOV first, then from GOV
        delegated to it (delegators in account order), shrinking those
        delegations by the same amount.
        """
        self._unlock_gov(account, amount)
        own = min(max(self._own_free(account), 0), amount)
        self._move(GOV, account, sink, own)
        short = amount - own
        for (src, dst), n in sorted(self.state.delegations.items()):
            if not short:
                break
            if dst != account:
                continue
            take = min(n, short)
            self._shrink_delegation(src, dst, take)
            self._move(GOV, src, sink, take)
            self._emit("DelegationForfeited", delegator=src, delegate=dst, amount=take)
            short -= take
        assert short == 0, "forfeit exceeded backing GOV"

    def _shrink_delegation(self, src: str, dst: str, amount: int) -> None:
        key = (src, dst)
        left = self.state.delegations[key] - amount
        if left:
            self.state.delegations[key] = left
        else:
            del self.state.delegations[key]
        for table, acct in ((self.state.gov_given, src), (self.state.gov_received, dst)):
            v = table[acct] - amount
            if v:
                table[acct] = v
            else:
                del table[acct]

    # -- delegation -------------------------------------------------------------

    @command("DelegateGov")
    def delegate_gov(self, delegator: str, delegate: str, amount: int) -> None:
        check_account(delegator)
        check_account(delegate)
        self._check_amount(amount)
        self._check_gov_spendable(delegator, amount)
        if not amount:
            return
        key = (delegator, delegate)
        self.state.delegations[key] = self.state.delegations.get(key, 0) + amount
        self.state.gov_given[delegator] = self.gov_given(delegator) + amount
        self.state.gov_received[delegate] = self.gov_received(delegate) + amount
        self._emit("Delegated", delegator=delegator, delegate=delegate, amount=amount)

    @command("RevokeDelegation")
    def revoke_delegation(self, delegator: str, delegate: str, amount: int) -> None:
        check_account(delegator)
        check_account(delegate)
        self._check_amount(amount)
        if self.state.delegations.get((delegator, delegate), 0) < amount:
            raise errors.NoSuchDelegation(f"no active delegation of {amount} GOV")
        if self.effective_gov(delegate) < amount:
            raise errors.DelegationLocked("delegated GOV is locked in a deposit or vote")
        if not amount:
            return
        self._shrink_delegation(delegator, delegate, amount)
        self._emit("Revoked", delegator=delegator, delegate=delegate, amount=amount)
