"""Accounts, balances, logical time and the hash-chained event log.

Every state change in the engine goes through this layer.  Public operations
are *commands*: the outermost call appends one command record (its inputs),
then the primitives below append *effect* records (Minted, Burned,
Transferred, ...).  Commands are enough to replay an engine from genesis;
effects are enough to recount every balance without re-executing anything.

Record hash::

    sha256(prev_hash_hex + canonical(event) + str(seq))

with ``"0" * 64`` as the first ``prev_hash``.
"""

from __future__ import annotations

import copy
import functools
import hashlib
import inspect
import json
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import errors
from .codec import canonical, decode, encode

ZERO_HASH = "0" * 64
MAX_BALANCE = 2**64 - 1

REP = "REP"
GOV = "GOV"
SYSTEM_TOKENS = (REP, GOV)

_HEX64 = re.compile(r"[0-9a-f]{64}\Z")
RECORD_FIELDS = ("seq", "prev_hash", "time", "event", "hash")

# command tag -> engine method name; filled by @command
COMMANDS: dict[str, str] = {}
# a rollback replays at most max(CHECKPOINT_MIN, len(log) // CHECKPOINT_SPLIT) records
CHECKPOINT_MIN = 256
CHECKPOINT_SPLIT = 8


def is_account(value) -> bool:
    return isinstance(value, str) and _HEX64.match(value) is not None


def check_account(value) -> str:
    if not is_account(value):
        raise errors.InvalidAccount(f"not a 32-byte hex account id: {value!r}")
    return value


def derive_account(label: str) -> str:
    """Deterministic account id from a label (system and simulated accounts)."""
    return hashlib.sha256(label.encode("utf-8")).hexdigest()


def record_hash(prev_hash: str, event: dict, seq: int) -> str:
    data = prev_hash + canonical(event) + str(seq)
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class EventRecord:
    seq: int
    prev_hash: str
    time: int
    event: dict
    hash: str

    @property
    def type(self) -> str:
        return self.event["type"]

    def to_line(self) -> str:
        obj = {"seq": self.seq, "prev_hash": self.prev_hash, "time": self.time,
               "event": self.event, "hash": self.hash}
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_line(cls, line: str) -> "EventRecord":
        """Strict parse: the line must be exactly the canonical rendering."""
        line = line.rstrip("\n")
        obj = json.loads(line)
        if not isinstance(obj, dict) or tuple(obj) != RECORD_FIELDS:
            raise ValueError("record fields out of order or missing")
        rec = cls(**obj)
        if (type(rec.seq) is not int or type(rec.time) is not int
                or not isinstance(rec.event, dict) or not isinstance(rec.event.get("type"), str)
                or not isinstance(rec.prev_hash, str) or not isinstance(rec.hash, str)):
            raise ValueError("record field types")
        if rec.to_line() != line:
            raise ValueError("record is not in canonical form")
        return rec


class EventLog:
    """Append-only list of :class:`EventRecord`."""

    def __init__(self):
        self._records: list[EventRecord] = []

    def append(self, time: int, event: dict) -> EventRecord:
        seq = len(self._records)
        prev = self._records[-1].hash if self._records else ZERO_HASH
        rec = EventRecord(seq, prev, time, event, record_hash(prev, event, seq))
        self._records.append(rec)
        return rec

    def _truncate(self, length: int) -> None:
        # only used to discard the records of a failed, uncommitted command
        del self._records[length:]

    @property
    def head(self) -> str:
        return self._records[-1].hash if self._records else ZERO_HASH

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __getitem__(self, i):
        return self._records[i]

    def lines(self) -> list[str]:
        return [r.to_line() for r in self._records]

    def write(self, path) -> None:
        Path(path).write_text("".join(line + "\n" for line in self.lines()), encoding="utf-8")


def verify_log(records: Sequence[EventRecord | str]) -> int | None:
    """Check hash chaining of a log.

    Accepts parsed records or raw text lines.  Returns ``None`` when every
    record checks out, otherwise the position (= expected seq) of the first
    record that is malformed, out of sequence, mis-chained, carries the wrong
    logical time, or whose hash does not recompute.
    """
    prev = ZERO_HASH
    tick = 0
    for i, rec in enumerate(records):
        if isinstance(rec, str):
            try:
                rec = EventRecord.from_line(rec)
            except Exception:
                return i
        if rec.seq != i or rec.prev_hash != prev or rec.time != tick:
            return i
        if not is_account(rec.hash):
            return i
        try:
            if record_hash(prev, rec.event, i) != rec.hash:
                return i
        except (TypeError, ValueError):
            return i
        if rec.event.get("type") == "AdvanceTime":
            ticks = rec.event.get("ticks")
            if type(ticks) is not int or ticks < 1:
                return i
            tick += ticks
        prev = rec.hash
    return None


def read_log_lines(path) -> list[str]:
    # undecodable bytes become U+FFFD so verification, not decoding, reports them
    text = Path(path).read_text(encoding="utf-8", errors="replace")
    return text.splitlines()


def parse_log(lines: Iterable[str]) -> list[EventRecord]:
    """Parse and verify; raises :class:`CorruptLog` at the first bad record."""
    lines = list(lines)
    bad = verify_log(lines)
    if bad is not None:
        raise errors.CorruptLog(bad)
    return [EventRecord.from_line(line) for line in lines]


@dataclass
class TokenBook:
    """Balances and supply counters of one token."""

    transferable: bool
    burnable: bool
    cap: int | None = None
    supply: int = 0
    minted: int = 0
    burned: int = 0
    balances: dict[str, int] = field(default_factory=dict)


def command(tag: str):
    """Mark an engine method as a logged, atomic, replayable command.

    The outermost command appends ``{"type": tag, <params>}`` and runs inside
    a transaction: any exception restores state and drops its records.
    Commands invoked from inside another command only contribute effects.
    """

    def deco(fn):
        sig = inspect.signature(fn)
        names = list(sig.parameters)[1:]
        COMMANDS[tag] = fn.__name__

        @functools.wraps(fn)
        def wrapper(self, *args, **kwargs):
            if self._depth:
                self._depth += 1
                try:
                    return fn(self, *args, **kwargs)
                finally:
                    self._depth -= 1
            bound = sig.bind(self, *args, **kwargs)
            bound.apply_defaults()
            fields = {n: bound.arguments[n] for n in names}
            with self._transaction():
                self._emit(tag, **fields)
                return fn(self, *args, **kwargs)

        return wrapper

    return deco


class LedgerOps:
    """Ledger primitives and the core commands.  Mixed into ``Engine``."""

    state: "object"
    log: EventLog
    _depth: int
    _emits: int
    _checkpoint: tuple | None

    # -- plumbing -----------------------------------------------------------

    # test hook: compare every cheap rollback against a full snapshot
    _check_rollback = False

    @contextmanager
    def _transaction(self):
        """Run one outermost command atomically.

        Domain errors are raised by validation, and primitives log each
        mutation as an effect record right away, so a domain error raised
        before the first effect record has changed nothing and only the
        command record is dropped.  Any other failure restores the last
        checkpoint and re-executes the commands logged since.  Checkpoints
        are spaced proportionally to the log length, and a successful
        command costs no copy at all.
        """
        mark = len(self.log)
        emits = self._emits
        cp = self._checkpoint
        if cp is None or mark - cp[1] >= max(CHECKPOINT_MIN, mark // CHECKPOINT_SPLIT):
            self._checkpoint = (copy.deepcopy(self.state), mark)
        reference = copy.deepcopy(self.state) if self._check_rollback else None
        self._depth = 1
        try:
            yield
        except BaseException as exc:
            self._depth = 0
            if isinstance(exc, errors.Fin4Error) and self._emits == emits + 1:
                self.log._truncate(mark)
            else:
                self._rollback(mark)
            if reference is not None and encode(self.state) != encode(reference):
                raise AssertionError("rollback left the state changed")
            raise
        finally:
            self._depth = 0

    def _rollback(self, mark: int) -> None:
        saved, length = self._checkpoint
        committed = list(self.log)[length:mark]
        self.state = copy.deepcopy(saved)
        self.log._truncate(length)
        for rec in committed:
            if rec.type in COMMANDS:
                self._reexecute(rec)
        if [r.hash for r in list(self.log)[length:]] != [r.hash for r in committed]:
            raise RuntimeError("rollback replay diverged from the committed log")

    def _reexecute(self, rec: EventRecord):
        args = [decode(v) for k, v in rec.event.items() if k != "type"]
        return getattr(self, COMMANDS[rec.type])(*args)

    def _emit(self, type_: str, **fields) -> EventRecord:
        # counted before anything can fail: a primitive calls this right after mutating
        self._emits += 1
        event = {"type": type_}
        for k, v in fields.items():
            event[k] = encode(v)
        return self.log.append(self.state.tick, event)

    def _book(self, token) -> TokenBook:
        try:
            return self.state.books[token]
        except (KeyError, TypeError):
            raise errors.UnknownToken(f"unknown token {token!r}") from None

    @staticmethod
    def _check_amount(amount) -> int:
        if type(amount) is not int or amount < 0:
            raise ValueError(f"amount must be a non-negative int, got {amount!r}")
        if amount > MAX_BALANCE:
            raise errors.BalanceOverflow(f"amount {amount} exceeds {MAX_BALANCE}")
        return amount

    def _credit(self, book: TokenBook, account: str, amount: int) -> None:
        new = book.balances.get(account, 0) + amount
        if new > MAX_BALANCE:
            raise errors.BalanceOverflow(f"balance would reach {new}")
        book.balances[account] = new

    def _debit(self, book: TokenBook, account: str, amount: int) -> None:
        have = book.balances.get(account, 0)
        if have < amount:
            raise errors.InsufficientBalance(f"{account[:12]}.. holds {have}, needs {amount}")
        if have == amount:
            book.balances.pop(account, None)
        else:
            book.balances[account] = have - amount

    # -- effects ------------------------------------------------------------

    def _mint(self, token, to: str, amount: int) -> None:
        book = self._book(token)
        if amount == 0:
            return
        if book.cap is not None and book.supply + amount > book.cap:
            raise errors.SupplyCapExceeded(
                f"token {token}: supply {book.supply} + {amount} > cap {book.cap}")
        if book.minted + amount > MAX_BALANCE:
            raise errors.BalanceOverflow(f"token {token}: minted total overflows")
        self._credit(book, to, amount)
        book.supply += amount
        book.minted += amount
        self._emit("Minted", token=token, to=to, amount=amount)

    def _burn(self, token, account: str, amount: int) -> None:
        book = self._book(token)
        if amount == 0:
            return
        self._debit(book, account, amount)
        book.supply -= amount
        book.burned += amount
        self._emit("Burned", token=token, account=account, amount=amount)

    def _move(self, token, src: str, dst: str, amount: int) -> None:
        book = self._book(token)
        if amount == 0:
            return
        if src != dst and book.balances.get(dst, 0) + amount > MAX_BALANCE:
            raise errors.BalanceOverflow(f"balance of {dst[:12]}.. would overflow")
        self._debit(book, src, amount)
        self._credit(book, dst, amount)
        self._emit("Transferred", token=token, sender=src, recipient=dst, amount=amount)

    # -- reads ----------------------------------------------------------------

    @property
    def now(self) -> int:
        return self.state.tick

    def balance_of(self, token, account: str) -> int:
        return self._book(token).balances.get(account, 0)

    def total_supply(self, token) -> int:
        return self._book(token).supply

    def total_minted(self, token) -> int:
        return self._book(token).minted

    def total_burned(self, token) -> int:
        return self._book(token).burned

    def holders(self, token) -> dict[str, int]:
        return dict(self._book(token).balances)

    # -- commands -------------------------------------------------------------

    @command("Transfer")
    def transfer(self, token, sender: str, recipient: str, amount: int) -> None:
        check_account(sender)
        check_account(recipient)
        book = self._book(token)
        self._check_amount(amount)
        if not book.transferable:
            raise errors.NonTransferable(f"token {token} is not transferable")
        if token == GOV:
            self._check_gov_spendable(sender, amount)
        if sender == recipient:
            if book.balances.get(sender, 0) < amount:
                raise errors.InsufficientBalance("self-transfer exceeds balance")
            return
        self._move(token, sender, recipient, amount)

    @command("MintUnits")
    def mint_units(self, token, to: str, amount: int) -> None:
        check_account(to)
        if token in SYSTEM_TOKENS:
            # REP comes only from awards and GOV only from claim_gov
            raise errors.UnknownToken(f"{token} is not a mintable PAT")
        self._book(token)
        self._check_amount(amount)
        self._mint(token, to, amount)

    @command("BurnUnits")
    def burn_units(self, token, account: str, amount: int) -> None:
        check_account(account)
        book = self._book(token)
        self._check_amount(amount)
        if not book.burnable:
            raise errors.NotBurnable(f"token {token} is not burnable")
        self._burn(token, account, amount)

    @command("AdvanceTime")
    def advance_time(self, ticks: int) -> int:
        if type(ticks) is not int or ticks < 1:
            raise errors.ZeroTicks("advance_time needs ticks >= 1")
        self.state.tick += ticks
        return self.state.tick
