"""Sources of value: swap pools, mint conversion, coupled burn, external notes.

Swap redemption is pro rata against outstanding supply::

    payout = floor(pool_balance * units / total_supply)

so redeeming the whole supply in one call drains the pool exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import errors
from .codec import variant
from .ledger import check_account, command, derive_account


def pool_account(token: int) -> str:
    """Custody account holding the backing units of ``token``'s swap pool."""
    return derive_account(f"fin4:pool:{token}")


def reserve_account(token: int) -> str:
    """Custody account the coupled burn of ``token`` draws from."""
    return derive_account(f"fin4:burn-reserve:{token}")


class _Backing:
    ROLE = "backing"

    def referenced_tokens(self) -> tuple:
        return ()

    def violations(self) -> list[str]:
        return []


@variant()
class SwapPool(_Backing):
    backing_token: int

    def referenced_tokens(self):
        return (self.backing_token,)


@variant()
class MintConversion(_Backing):
    target_token: int
    rate_num: int
    rate_den: int

    def referenced_tokens(self):
        return (self.target_token,)

    def violations(self):
        ok = (type(self.rate_num) is int and self.rate_num >= 0
              and type(self.rate_den) is int and self.rate_den >= 1)
        return [] if ok else ["InvalidBacking"]


@variant()
class CoupledBurn(_Backing):
    coupled_token: int

    def referenced_tokens(self):
        return (self.coupled_token,)


@variant()
class ExternalNote(_Backing):
    text: str

    def violations(self):
        return [] if isinstance(self.text, str) else ["InvalidBacking"]


@dataclass(frozen=True)
class Pool:
    token: int
    backing_token: int
    balance: int


class BackingOps:
    """Backing commands.  Mixed into ``Engine``."""

    def _source(self, token: int, cls, error):
        design = self.get_token(token).design
        for s in design.sources_of_value:
            if isinstance(s, cls):
                return s
        raise error(f"token {token} has no {cls.TAG}")

    def pool(self, token: int) -> Pool:
        spec = self._source(token, SwapPool, errors.NoSwapPool)
        return Pool(token, spec.backing_token, self.state.pools[token])

    def pools(self) -> list[Pool]:
        return [self.pool(t) for t in sorted(self.state.pools)]

    @command("DepositToPool")
    def deposit_to_pool(self, depositor: str, token: int, amount: int) -> int:
        check_account(depositor)
        spec = self._source(token, SwapPool, errors.NoSwapPool)
        self._check_amount(amount)
        if amount:
            self._move(spec.backing_token, depositor, pool_account(token), amount)
            self.state.pools[token] += amount
            self._emit("PoolDeposited", token=token, depositor=depositor, amount=amount)
        return self.state.pools[token]

    @command("SwapRedeem")
    def swap_redeem(self, holder: str, token: int, units: int) -> int:
        check_account(holder)
        spec = self._source(token, SwapPool, errors.NoSwapPool)
        self._check_amount(units)
        if self.balance_of(token, holder) < units:
            raise errors.InsufficientBalance(f"holder has fewer than {units} units of {token}")
        if not units:
            return 0
        pool = self.state.pools[token]
        if pool == 0:
            raise errors.EmptyPool(f"pool of token {token} is empty")
        payout = pool * units // self.total_supply(token)
        self._burn(token, holder, units)
        self._move(spec.backing_token, pool_account(token), holder, payout)
        self.state.pools[token] = pool - payout
        self._emit("PoolRedeemed", token=token, holder=holder, units=units, payout=payout)
        return payout

    @command("MintConvert")
    def mint_convert(self, holder: str, token: int, amount: int) -> int:
        check_account(holder)
        spec = self._source(token, MintConversion, errors.NoMintConversion)
        self._check_amount(amount)
        if not self._book(token).burnable:
            raise errors.NotBurnable(f"token {token} is not burnable")
        if self.balance_of(token, holder) < amount:
            raise errors.InsufficientBalance(f"holder has fewer than {amount} units of {token}")
        minted = amount * spec.rate_num // spec.rate_den
        self._burn(token, holder, amount)
        self._mint(spec.target_token, holder, minted)
        return minted

    @command("CoupledBurn")
    def coupled_burn(self, holder: str, token: int, amount: int) -> None:
        check_account(holder)
        spec = self._source(token, CoupledBurn, errors.NoCoupledBurn)
        self._check_amount(amount)
        coupled = spec.coupled_token
        if not (self._book(token).burnable and self._book(coupled).burnable):
            raise errors.NotBurnable(f"tokens {token} and {coupled} must both be burnable")
        if self.balance_of(token, holder) < amount:
            raise errors.InsufficientBalance(f"holder has fewer than {amount} units of {token}")
        source = holder if self.config.burn_source == "holder" else reserve_account(token)
        if self.balance_of(coupled, source) < amount:
            raise errors.InsufficientCoupledBalance(
                f"{self.config.burn_source} holds fewer than {amount} units of {coupled}")
        self._burn(token, holder, amount)
        self._burn(coupled, source, amount)
