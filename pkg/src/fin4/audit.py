"""Views derived from an event log alone.

:class:`LogFold` consumes *effect* records only (Minted, ClaimClosed, ...)
and never re-executes commands, so it is an independent recount of what the
engine did.  Simulation replay and the CLI report are both built on it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .ledger import GOV, REP, EventRecord


@dataclass
class TokenRow:
    id: int
    symbol: str
    name: str
    creator: str
    curated_status: str = "NotListed"


@dataclass
class PollRow:
    id: int
    token: int
    challenger: str
    outcome: str = "Unresolved"
    for_weight: int = 0
    against_weight: int = 0
    payouts: list = field(default_factory=list)


class LogFold:
    def __init__(self):
        self.tokens: dict[int, TokenRow] = {}
        self.claims: dict[int, str] = {}  # claim id -> Open | Approved | Rejected
        self.claim_token: dict[int, int] = {}
        self.minted: dict = defaultdict(int)
        self.burned: dict = defaultdict(int)
        self.balances: dict = defaultdict(lambda: defaultdict(int))
        self.pools: dict[int, int] = {}
        self.polls: dict[int, PollRow] = {}
        self.curated: set[int] = set()
        self.tick = 0
        self.head = None

    def apply(self, rec: EventRecord) -> None:
        ev = rec.event
        kind = ev["type"]
        handler = getattr(self, "_on_" + kind, None)
        if handler is not None:
            handler(ev)
        if kind == "AdvanceTime":
            self.tick = rec.time + ev["ticks"]
        self.head = rec.hash

    # effects
    def _on_TokenRegistered(self, ev):
        self.tokens[ev["token"]] = TokenRow(ev["token"], ev["symbol"], ev["name"], ev["creator"])
        self.minted[ev["token"]] += 0

    def _on_PoolOpened(self, ev):
        self.pools[ev["token"]] = 0

    def _on_Minted(self, ev):
        self.minted[ev["token"]] += ev["amount"]
        self.balances[ev["token"]][ev["to"]] += ev["amount"]

    def _on_Burned(self, ev):
        self.burned[ev["token"]] += ev["amount"]
        self.balances[ev["token"]][ev["account"]] -= ev["amount"]

    def _on_Transferred(self, ev):
        book = self.balances[ev["token"]]
        book[ev["sender"]] -= ev["amount"]
        book[ev["recipient"]] += ev["amount"]

    def _on_ClaimOpened(self, ev):
        self.claims[ev["claim"]] = "Open"
        self.claim_token[ev["claim"]] = ev["token"]

    def _on_ClaimClosed(self, ev):
        self.claims[ev["claim"]] = ev["status"]

    def _on_CuratedStatus(self, ev):
        self.tokens[ev["token"]].curated_status = ev["status"]
        if ev["status"] == "Listed":
            self.curated.add(ev["token"])
        else:
            self.curated.discard(ev["token"])

    def _on_PoolDeposited(self, ev):
        self.pools[ev["token"]] += ev["amount"]

    def _on_PoolRedeemed(self, ev):
        self.pools[ev["token"]] -= ev["payout"]

    def _on_PollOpened(self, ev):
        self.polls[ev["poll"]] = PollRow(ev["poll"], ev["token"], ev["challenger"])

    def _on_PollResolved(self, ev):
        row = self.polls[ev["poll"]]
        row.outcome = ev["outcome"]
        row.for_weight = ev["for_weight"]
        row.against_weight = ev["against_weight"]

    def _on_Payout(self, ev):
        self.polls[ev["poll"]].payouts.append((ev["account"], ev["amount"], ev["role"]))

    # derived
    def funnel(self) -> dict:
        statuses = list(self.claims.values())
        return {"submitted": len(statuses),
                "approved": statuses.count("Approved"),
                "rejected": statuses.count("Rejected"),
                "open": statuses.count("Open")}

    def holdings(self, token) -> dict[str, int]:
        return {a: n for a, n in sorted(self.balances[token].items()) if n}

    def units_minted(self) -> dict[int, int]:
        return {t: self.minted[t] for t in sorted(self.tokens)}

    def supply(self, token) -> int:
        return self.minted[token] - self.burned[token]

    def rep(self) -> dict[str, int]:
        return self.holdings(REP)

    def gov(self) -> dict[str, int]:
        return self.holdings(GOV)


def fold(records) -> LogFold:
    f = LogFold()
    for rec in records:
        f.apply(rec)
    return f
