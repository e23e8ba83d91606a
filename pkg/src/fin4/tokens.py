"""Permissionless creation of Positive Action Tokens (PATs).

A :class:`TokenDesign` covers the token-level attributes of the DLT taxonomy
(supply, burn, transferability, creation condition, unconditional creation)
plus verifiers, minting policy and sources of value.  Any account may create
any number of tokens; ids are sequential from 0.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from enum import Enum

from . import errors
from .codec import decode, variant
from .ledger import TokenBook, check_account, command, is_account

MAX_NAME_LEN = 64
_SYMBOL = re.compile(r"[A-Z]{1,8}\Z")


class CreationCondition(str, Enum):
    ACTION = "Action"
    CONSENSUS = "Consensus"
    BOTH = "Both"


class CuratedStatus(str, Enum):
    NOT_LISTED = "NotListed"
    APPLIED = "Applied"
    LISTED = "Listed"
    CHALLENGED = "Challenged"


@variant()
class Capped:
    max: int


@variant()
class Uncapped:
    pass


@variant("None")
class NoPremint:
    pass


@variant()
class Partial:
    amount: int
    to: str


@variant()
class All:
    amount: int
    to: str


@variant()
class FixedPerClaim:
    n: int = 1

    def amount(self, quantity: int) -> int:
        return self.n


@variant()
class ProportionalToQuantity:
    unit_per_quantity: int

    def amount(self, quantity: int) -> int:
        return self.unit_per_quantity * quantity


@variant()
class TokenDesign:
    name: str
    symbol: str
    supply: Capped | Uncapped = Uncapped()
    burnable: bool = False
    transferable: bool = True
    creation_condition: CreationCondition = CreationCondition.ACTION
    unconditional_creation: NoPremint | Partial | All = NoPremint()
    minting_policy: FixedPerClaim | ProportionalToQuantity = FixedPerClaim(1)
    verifiers: tuple = ()
    sources_of_value: tuple = ()

    def __post_init__(self):
        try:
            cond = CreationCondition(self.creation_condition)
        except ValueError:
            cond = self.creation_condition  # reported by validate_design
        object.__setattr__(self, "creation_condition", cond)
        object.__setattr__(self, "verifiers", tuple(self.verifiers))
        object.__setattr__(self, "sources_of_value", tuple(self.sources_of_value))

    @property
    def cap(self) -> int | None:
        return self.supply.max if isinstance(self.supply, Capped) else None

    def replace(self, **changes) -> "TokenDesign":
        return dataclasses.replace(self, **changes)


def design_from_data(data: dict) -> TokenDesign:
    """Build a design from its declarative (JSON-decoded) form."""
    if "TokenDesign" not in data:
        data = {"TokenDesign": data}
    design = decode(data)
    if not isinstance(design, TokenDesign):
        raise errors.InvalidDesign(["NotATokenDesign"])
    return design


@dataclass
class TokenRecord:
    id: int
    design: TokenDesign
    creator: str
    created_at: int
    curated_status: CuratedStatus = CuratedStatus.NOT_LISTED


def _is_uint(x) -> bool:
    return type(x) is int and x >= 0


def validate_design(design: TokenDesign) -> list[str]:
    """Return the violated design rules; an empty list means the design is valid.

    Only checks that need no engine state.  References to other tokens are
    checked at creation time.
    """
    out: list[str] = []
    if not isinstance(design.name, str) or not design.name or len(design.name) > MAX_NAME_LEN:
        out.append("InvalidName")
    if not isinstance(design.symbol, str) or not _SYMBOL.match(design.symbol):
        out.append("InvalidSymbol")
    if type(design.burnable) is not bool or type(design.transferable) is not bool:
        out.append("InvalidFlag")

    if design.creation_condition is not CreationCondition.ACTION:
        out.append("CreationConditionUnsupported")

    cap = None
    if isinstance(design.supply, Capped):
        if not _is_uint(design.supply.max):
            out.append("InvalidCap")
        else:
            cap = design.supply.max
    elif not isinstance(design.supply, Uncapped):
        out.append("InvalidSupply")

    pre = design.unconditional_creation
    if isinstance(pre, (Partial, All)):
        if not _is_uint(pre.amount) or not is_account(pre.to):
            out.append("InvalidPreMint")
        elif cap is not None and pre.amount > cap:
            out.append("PreMintExceedsCap")
        if isinstance(pre, All) and design.verifiers:
            out.append("VerifiersOnPreMintedToken")
    elif not isinstance(pre, NoPremint):
        out.append("InvalidUnconditionalCreation")

    policy = design.minting_policy
    if isinstance(policy, FixedPerClaim):
        if type(policy.n) is not int or policy.n < 1:
            out.append("InvalidMintingPolicy")
    elif isinstance(policy, ProportionalToQuantity):
        if type(policy.unit_per_quantity) is not int or policy.unit_per_quantity < 1:
            out.append("InvalidMintingPolicy")
    else:
        out.append("InvalidMintingPolicy")

    for v in design.verifiers:
        if getattr(v, "ROLE", None) != "verifier":
            out.append("UnknownVerifier")
        else:
            out.extend(v.violations())

    kinds = set()
    for s in design.sources_of_value:
        if getattr(s, "ROLE", None) != "backing":
            out.append("UnknownSourceOfValue")
            continue
        out.extend(s.violations())
        if s.TAG != "ExternalNote":
            if s.TAG in kinds:
                out.append("DuplicateSourceOfValue")
            kinds.add(s.TAG)
    return out


class TokenFactoryOps:
    """Token creation and registry reads.  Mixed into ``Engine``."""

    def _reference_violations(self, design: TokenDesign, new_id: int) -> list[str]:
        out = []
        for v in design.verifiers:
            ref = getattr(v, "token", None)
            if ref is not None and ref != new_id and ref not in self.state.books:
                out.append("UnknownReferencedToken")
        for s in design.sources_of_value:
            for ref in s.referenced_tokens():
                if ref == new_id:
                    out.append("SelfBacking")
                elif not isinstance(ref, int) or ref not in self.state.books:
                    out.append("UnknownReferencedToken")
        return out

    @command("CreateToken")
    def create_token(self, creator: str, design: TokenDesign) -> int:
        check_account(creator)
        if not isinstance(design, TokenDesign):
            raise errors.InvalidDesign(["NotATokenDesign"])
        new_id = len(self.state.tokens)
        violations = validate_design(design) or self._reference_violations(design, new_id)
        if violations:
            raise errors.InvalidDesign(violations)

        self.state.books[new_id] = TokenBook(
            transferable=design.transferable, burnable=design.burnable, cap=design.cap)
        self.state.tokens.append(TokenRecord(new_id, design, creator, self.state.tick))
        self._emit("TokenRegistered", token=new_id, creator=creator,
                   name=design.name, symbol=design.symbol)
        pre = design.unconditional_creation
        if isinstance(pre, (Partial, All)):
            self._mint(new_id, pre.to, pre.amount)
        for s in design.sources_of_value:
            if s.TAG == "SwapPool":
                self.state.pools[new_id] = 0
                self._emit("PoolOpened", token=new_id, backing_token=s.backing_token)
        self._award_rep(creator, "TokenCreated")
        return new_id

    def get_token(self, token_id: int) -> TokenRecord:
        if type(token_id) is not int or not 0 <= token_id < len(self.state.tokens):
            raise errors.UnknownToken(f"unknown token {token_id!r}")
        return self.state.tokens[token_id]

    def list_tokens(self, curated_only: bool = False) -> list[TokenRecord]:
        if curated_only:
            return [t for t in self.state.tokens if t.curated_status is CuratedStatus.LISTED]
        return list(self.state.tokens)

    def _set_curated(self, token_id: int, status: CuratedStatus) -> None:
        rec = self.state.tokens[token_id]
        if rec.curated_status is not status:
            rec.curated_status = status
            self._emit("CuratedStatus", token=token_id, status=status)
