"""Running scenarios: one engine, one random stream, agents in a fixed order.

Tick 0 sets the world up (team tokens, GOV claims, configured delegations).
Each later tick advances logical time by one, then every agent acts once,
in ascending account-id order.  A metrics frame is taken after the agents
of a tick have acted, every ``metrics_interval`` ticks and at the last tick.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import io
import itertools
import json
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .. import errors, signing
from ..claims import ClaimStatus
from ..engine import Engine
from ..ledger import derive_account
from ..tcr import ListingStatus, Outcome
from ..tokens import design_from_data
from . import config as cfg
from .agents import AGENT_CLASSES, CreatorAgent, OracleAgent
from .metrics import MetricsFrame, frame_due, frames_csv, live_frame
from .rng import SplitMix64


def agent_account(j: int) -> str:
    return derive_account(f"fin4-sim:agent:{j}")


def team_account(k: int) -> str:
    return derive_account(f"fin4-sim:team:{k}")


def oracle_seed(seed: int, j: int) -> str:
    return signing.derive_seed(f"fin4-sim:oracle:{seed}:{j}")


@dataclass
class RunResult:
    config: cfg.ScenarioConfig
    engine: Engine
    frames: list
    truth: dict = field(default_factory=dict)  # claim id -> (claimant, performed)
    failed_actions: Counter = field(default_factory=Counter)

    @property
    def log(self):
        return self.engine.log

    @property
    def head(self) -> str:
        return self.engine.head

    def summary(self) -> dict:
        claims = self.engine.state.claims
        status = Counter(c.status for c in claims)
        riders = [c for c in claims if not self.truth.get(c.id, (None, True))[1]]
        n = len(claims)
        approved = status[ClaimStatus.APPROVED]
        return {
            "scenario": self.config.name,
            "seed": self.config.seed,
            "steps": self.config.steps,
            "claims_submitted": n,
            "claims_approved": approved,
            "claims_rejected": status[ClaimStatus.REJECTED],
            "claims_open": status[ClaimStatus.OPEN],
            "approval_ratio": f"{approved / n:.6f}" if n else "0.000000",
            "free_rider_submitted": len(riders),
            "free_rider_approved": sum(c.status is ClaimStatus.APPROVED for c in riders),
            "units_minted": sum(self.engine.total_minted(t.id) for t in self.engine.state.tokens),
            "tokens": len(self.engine.state.tokens),
            "curated": sum(t.curated_status.value == "Listed" for t in self.engine.state.tokens),
            "polls": len(self.engine.state.polls),
            "log_records": len(self.engine.log),
            "log_head_hash": self.engine.head,
        }


class Simulation:
    def __init__(self, config: cfg.ScenarioConfig):
        self.config = config
        self.rng = SplitMix64(config.seed)
        self.engine = Engine(config.engine, meta={
            "scenario": config.name, "seed": config.seed, "steps": config.steps,
            "metrics_interval": config.metrics_interval})
        self.truth: dict[int, tuple] = {}
        self.failed_actions: Counter = Counter()
        self.token_of_design: dict[int, int] = {}
        self.design_of_token: dict[int, int] = {}
        self.frames: list[MetricsFrame] = []
        self.team = [team_account(k) for k in range(config.team_size)]

        self.agents = []
        per_kind: Counter = Counter()
        j = 0
        for policy, count in config.agents:
            cls = AGENT_CLASSES[type(policy)]
            for _ in range(count):
                args = (j, agent_account(j), policy, per_kind[cls])
                if cls is OracleAgent:
                    agent = cls(*args, seed_hex=oracle_seed(config.seed, j))
                elif cls is CreatorAgent:
                    agent = cls(*args, designs=tuple(policy.designs_to_create))
                else:
                    agent = cls(*args)
                self.agents.append(agent)
                per_kind[cls] += 1
                j += 1
        self.order = sorted(self.agents, key=lambda a: a.account)
        self.designs = [design_from_data(self._resolve(e.design, f"token_designs[{i}].design"))
                        for i, e in enumerate(config.token_designs)]

    # -- references ---------------------------------------------------------

    def _ref(self, ref: str, path: str) -> str:
        parts = ref[1:].split(":")
        try:
            if parts[0] == "team":
                return self.team[int(parts[1]) if len(parts) > 1 else 0]
            if parts[0] == "key":
                kind, i = parts[1], int(parts[2])
                agent = [a for a in self.agents if a.kind == kind][i]
                return agent.key
            kind, i = parts[0], int(parts[1])
            return [a for a in self.agents if a.kind == kind][i].account
        except (IndexError, ValueError, AttributeError):
            raise errors.InvalidConfig(path, f"unresolvable reference {ref!r}") from None

    def _resolve(self, data, path):
        if isinstance(data, str) and data.startswith("@"):
            return self._ref(data, path)
        if isinstance(data, dict):
            return {k: self._resolve(v, f"{path}.{k}") for k, v in data.items()}
        if isinstance(data, list):
            return [self._resolve(v, f"{path}[{i}]") for i, v in enumerate(data)]
        return data

    # -- ground truth and views used by agents -----------------------------

    def performed(self, claim_id: int) -> bool:
        return self.truth.get(claim_id, (None, True))[1]

    def is_good(self, token: int) -> bool:
        d = self.design_of_token.get(token)
        return True if d is None else self.config.token_designs[d].good

    def open_claims(self):
        return [c.id for c in self.engine.state.claims if c.status is ClaimStatus.OPEN]

    def housekeep(self, agent, token: int) -> None:
        """Advance a token's curation when a stage has run out."""
        e = self.engine
        listing = e.get_listing(token)
        if listing is None:
            return
        if listing.status is ListingStatus.APPLIED and e.now >= listing.deadline:
            agent._try(self, e.update_status, token)
        elif listing.status is ListingStatus.CHALLENGED:
            poll = e.get_poll(listing.poll)
            if poll.outcome is Outcome.UNRESOLVED and e.now >= poll.reveal_deadline:
                agent._try(self, e.resolve_poll, poll.id)

    # -- the run ------------------------------------------------------------

    def register(self, d: int, tid: int) -> None:
        self.token_of_design[d] = tid
        self.design_of_token[tid] = d

    def setup(self) -> None:
        e = self.engine
        team_designs = [i for i, entry in enumerate(self.config.token_designs) if entry.creator == "team"]
        for n, d in enumerate(team_designs):
            tid = e.create_token(self.team[n % len(self.team)], self.designs[d])
            self.register(d, tid)
        for acct in self.team:
            if e.claimable_gov(acct):
                e.claim_gov(acct)
        for i, (src, dst, amount) in enumerate(self.config.delegations):
            path = f"delegations[{i}]"
            src = self._resolve(src, path + ".from")
            dst = self._resolve(dst, path + ".to")
            e.delegate_gov(src, dst, amount)

    def step(self) -> None:
        self.engine.advance_time(1)
        for agent in self.order:
            agent.act(self)
        t = self.engine.now
        if frame_due(t, self.config.metrics_interval, self.config.steps):
            self.frames.append(live_frame(self.engine))

    def run(self) -> RunResult:
        self.setup()
        for _ in range(self.config.steps):
            self.step()
        return RunResult(self.config, self.engine, self.frames, self.truth, self.failed_actions)


def run(config) -> RunResult:
    if isinstance(config, dict):
        config = cfg.scenario_from_data(config)
    return Simulation(config).run()


# -- sweeps -----------------------------------------------------------------

_STEP = re.compile(r"([^.\[\]]+)|\[(\d+)\]")


def _set_path(data: dict, path: str, value) -> None:
    steps = [m.group(1) if m.group(1) is not None else int(m.group(2))
             for m in _STEP.finditer(path)]
    if not steps:
        raise errors.InvalidConfig(path, "empty grid path")
    node = data
    try:
        for s in steps[:-1]:
            node = node[s]
        if isinstance(node, dict) or (isinstance(node, list) and steps[-1] < len(node)):
            node[steps[-1]] = value
        else:
            raise KeyError(steps[-1])
    except (KeyError, IndexError, TypeError):
        raise errors.InvalidConfig(path, "grid path does not exist in the scenario") from None


def grid_points(grid) -> list[dict]:
    """Expand a grid file into an ordered list of ``{path: value}`` points.

    Either ``{"axes": [{"path": p, "values": [...]}, ...]}`` (cartesian
    product, last axis fastest) or ``{"points": [{p: v, ...}, ...]}``.
    """
    if not isinstance(grid, dict):
        raise errors.InvalidConfig("grid", "expected an object")
    if "points" in grid:
        points = grid["points"]
        if not isinstance(points, list) or not all(isinstance(p, dict) for p in points):
            raise errors.InvalidConfig("grid.points", "expected a list of objects")
    else:
        axes = grid.get("axes")
        if not isinstance(axes, list) or not axes:
            raise errors.InvalidConfig("grid.axes", "expected a nonempty list")
        for i, ax in enumerate(axes):
            if not isinstance(ax, dict) or not isinstance(ax.get("path"), str) \
                    or not isinstance(ax.get("values"), list) or not ax["values"]:
                raise errors.InvalidConfig(f"grid.axes[{i}]", "need path and nonempty values")
        points = [dict(zip((ax["path"] for ax in axes), combo))
                  for combo in itertools.product(*(ax["values"] for ax in axes))]
    if not points:
        raise errors.InvalidConfig("grid", "grid is empty")
    return points


def derived_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(seed.to_bytes(8, "big") + index.to_bytes(8, "big")).digest()
    return int.from_bytes(digest[:8], "big")


def sweep_configs(base, grid) -> list[tuple[dict, cfg.ScenarioConfig]]:
    if isinstance(base, cfg.ScenarioConfig):
        base = base.raw
    base_cfg = cfg.scenario_from_data(base)
    out = []
    for i, point in enumerate(grid_points(grid)):
        data = copy.deepcopy(base)
        for path, value in point.items():
            _set_path(data, path, value)
        data["seed"] = derived_seed(base_cfg.seed, i)
        out.append((point, cfg.scenario_from_data(data)))
    return out


def _summary_of(config: cfg.ScenarioConfig) -> dict:
    return run(config).summary()


def sweep(base, grid, workers: int = 1) -> list[tuple[dict, dict]]:
    """One independent run per grid point; rows in grid order."""
    jobs = sweep_configs(base, grid)
    configs = [c for _, c in jobs]
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_summary_of, configs))
    else:
        summaries = [_summary_of(c) for c in configs]
    return [(point, summary) for (point, _), summary in zip(jobs, summaries)]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        params = list(rows[0][0])
        keys = list(rows[0][1])
        w.writerow(["index", *params, *keys])
        for i, (point, summary) in enumerate(rows):
            w.writerow([i, *(json.dumps(point.get(p)) for p in params),
                        *(summary[k] for k in keys)])
    return buf.getvalue()


# -- outputs ----------------------------------------------------------------

def write_run(result: RunResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result.log.write(out / "events.log")
    (out / "metrics.csv").write_text(frames_csv(result.frames), encoding="utf-8")
    (out / "summary.json").write_text(json.dumps(result.summary(), indent=2) + "\n", encoding="utf-8")
    return out


def write_sweep(rows, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(sweep_csv(rows), encoding="utf-8")
    return out
