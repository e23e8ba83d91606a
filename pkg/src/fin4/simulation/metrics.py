"""Metrics frames: sampled live from an engine, or rebuilt from its log."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .. import errors
from ..audit import LogFold
from ..claims import ClaimStatus
from ..ledger import GOV, REP, parse_log
from ..tokens import CuratedStatus

COLUMNS = ("tick", "claims_submitted", "claims_approved", "claims_rejected", "units_minted",
           "curated_list", "rep_distribution", "gov_supply", "pool_balances", "log_head_hash")


@dataclass(frozen=True)
class MetricsFrame:
    tick: int
    claims_submitted: int
    claims_approved: int
    claims_rejected: int
    units_minted: tuple      # ((token, cumulative minted), ...)
    curated_list: tuple      # listed token ids, ascending
    rep_distribution: tuple  # ((account, REP), ...) nonzero, by account
    gov_supply: int
    pool_balances: tuple     # ((token, balance), ...)
    log_head_hash: str

    def row(self) -> list[str]:
        pairs = lambda items: ";".join(f"{k}={v}" for k, v in items)
        return [str(self.tick), str(self.claims_submitted), str(self.claims_approved),
                str(self.claims_rejected), pairs(self.units_minted),
                ";".join(map(str, self.curated_list)), pairs(self.rep_distribution),
                str(self.gov_supply), pairs(self.pool_balances), self.log_head_hash]


def live_frame(engine) -> MetricsFrame:
    """Sample the engine's current state (no log access except the head)."""
    claims = engine.state.claims
    tokens = engine.state.tokens
    return MetricsFrame(
        tick=engine.now,
        claims_submitted=len(claims),
        claims_approved=sum(c.status is ClaimStatus.APPROVED for c in claims),
        claims_rejected=sum(c.status is ClaimStatus.REJECTED for c in claims),
        units_minted=tuple((t.id, engine.total_minted(t.id)) for t in tokens),
        curated_list=tuple(t.id for t in tokens if t.curated_status is CuratedStatus.LISTED),
        rep_distribution=tuple(sorted(engine.holders(REP).items())),
        gov_supply=engine.total_supply(GOV),
        pool_balances=tuple(sorted(engine.state.pools.items())),
        log_head_hash=engine.head,
    )


def folded_frame(fold: LogFold, tick: int) -> MetricsFrame:
    funnel = fold.funnel()
    return MetricsFrame(
        tick=tick,
        claims_submitted=funnel["submitted"],
        claims_approved=funnel["approved"],
        claims_rejected=funnel["rejected"],
        units_minted=tuple(fold.units_minted().items()),
        curated_list=tuple(sorted(fold.curated)),
        rep_distribution=tuple(fold.rep().items()),
        gov_supply=fold.supply(GOV),
        pool_balances=tuple(sorted(fold.pools.items())),
        log_head_hash=fold.head,
    )


def frame_due(tick: int, interval: int, steps: int | None) -> bool:
    return tick >= 1 and (tick % interval == 0 or tick == steps)


def replay(records) -> list[MetricsFrame]:
    """Rebuild the frames of a simulation run from its event log.

    A frame for tick ``t`` is the state after the agents' actions at ``t``,
    i.e. just before the ``AdvanceTime`` record that leaves ``t`` (or at the
    end of the log).  Interval and step count come from the genesis record.
    """
    records = list(records)
    if not records:
        return []
    if isinstance(records[0], str):
        records = parse_log(records)
    else:
        records = parse_log([r.to_line() for r in records])
    meta = records[0].event.get("meta") or {}
    interval = meta.get("metrics_interval", 1)
    steps = meta.get("steps")
    if type(interval) is not int or interval < 1:
        raise errors.CorruptLog(0, "genesis metrics_interval")

    fold = LogFold()
    frames = []
    for rec in records:
        if rec.type == "AdvanceTime" and frame_due(fold.tick, interval, steps):
            frames.append(folded_frame(fold, fold.tick))
        fold.apply(rec)
    if frame_due(fold.tick, interval, steps) and (not frames or frames[-1].tick != fold.tick):
        frames.append(folded_frame(fold, fold.tick))
    return frames


def frames_csv(frames) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for f in frames:
        w.writerow(f.row())
    return buf.getvalue()
