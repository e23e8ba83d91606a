"""The deterministic single-writer engine that ties the modules together."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import errors
from .backing import BackingOps
from .claims import ClaimOps
from .codec import decode, encode, variant
from .ledger import (COMMANDS, GOV, REP, EventLog, EventRecord, LedgerOps, TokenBook,
                     parse_log)
from .reputation import RepConfig, ReputationOps
from .tcr import TcrOps, TcrParams
from .tokens import TokenFactoryOps

BURN_SOURCES = ("custody", "holder")


@variant()
class EngineConfig:
    rep: RepConfig = RepConfig()
    tcr: TcrParams = TcrParams()
    gov_transferable: bool = False
    burn_source: str = "custody"

    def violations(self) -> list[str]:
        out = [f"rep.{v}" for v in self.rep.violations()]
        out += [f"tcr.{v}" for v in self.tcr.violations()]
        if type(self.gov_transferable) is not bool:
            out.append("gov_transferable")
        if self.burn_source not in BURN_SOURCES:
            out.append("burn_source")
        return out


@dataclass
class EngineState:
    tick: int = 0
    books: dict = field(default_factory=dict)
    tokens: list = field(default_factory=list)
    claims: list = field(default_factory=list)
    listings: dict = field(default_factory=dict)
    polls: list = field(default_factory=list)
    pools: dict = field(default_factory=dict)
    gov_claimed: dict = field(default_factory=dict)
    delegations: dict = field(default_factory=dict)
    gov_given: dict = field(default_factory=dict)
    gov_received: dict = field(default_factory=dict)
    gov_locked: dict = field(default_factory=dict)


class Engine(LedgerOps, TokenFactoryOps, ClaimOps, TcrOps, ReputationOps, BackingOps):
    """One independent token economy.

    All mutations go through the command methods; each appends to
    :attr:`log`.  Record 0 is a ``Genesis`` event carrying the config (and
    optional free-form ``meta``), so the log alone is enough to rebuild the
    engine with :meth:`from_log`.
    """

    def __init__(self, config: EngineConfig | None = None, meta: dict | None = None):
        self.config = config or EngineConfig()
        bad = self.config.violations()
        if bad:
            raise errors.InvalidConfig("engine", ", ".join(bad))
        self.meta = dict(meta or {})
        self.state = EngineState()
        self.state.books[REP] = TokenBook(transferable=False, burnable=False)
        self.state.books[GOV] = TokenBook(transferable=self.config.gov_transferable, burnable=False)
        self.log = EventLog()
        self._depth = 0
        self._emits = 0
        self._checkpoint = None  # (state copy, log length) restored by rollbacks
        self._emit("Genesis", config=self.config, meta=self.meta)

    @property
    def head(self) -> str:
        return self.log.head

    @classmethod
    def from_log(cls, records: Iterable[EventRecord | str]) -> "Engine":
        """Rebuild an engine by re-executing the commands of a log.

        Raises :class:`CorruptLog` if the log fails verification, or if
        re-execution does not reproduce it record for record.
        """
        records = list(records)
        if records and isinstance(records[0], str):
            records = parse_log(records)
        else:
            records = parse_log([r.to_line() for r in records])
        if not records:
            raise errors.CorruptLog(0, "empty log has no genesis")
        genesis = records[0].event
        if genesis.get("type") != "Genesis":
            raise errors.CorruptLog(0, "first record is not Genesis")
        try:
            engine = cls(decode(genesis["config"]), genesis.get("meta"))
        except Exception as exc:
            raise errors.CorruptLog(0, f"bad genesis: {exc}") from None
        for rec in records[1:]:
            if rec.type not in COMMANDS:
                continue
            if len(engine.log) != rec.seq:
                raise errors.CorruptLog(min(len(engine.log), rec.seq), "diverged")
            try:
                engine._reexecute(rec)
            except errors.Fin4Error as exc:
                raise errors.CorruptLog(rec.seq, f"{type(exc).__name__} on replay") from None
        mine = list(engine.log)
        for a, b in zip(mine, records):
            if a.hash != b.hash:
                raise errors.CorruptLog(b.seq, "replay diverged")
        if len(mine) != len(records):
            raise errors.CorruptLog(min(len(mine), len(records)), "replay length differs")
        return engine

    def snapshot(self) -> dict:
        """Plain-data view of the whole state (for equality checks and debugging)."""
        return encode(self.state)
