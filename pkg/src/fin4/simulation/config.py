"""Declarative scenario files.

A scenario is a JSON object::

    {
      "name": "demo", "seed": 7, "steps": 20, "metrics_interval": 5,
      "engine": {"rep": {...}, "tcr": {...}, "gov_transferable": false,
                 "burn_source": "custody"},
      "team_size": 1,
      "agents": [{"policy": {"HonestClaimant": {"action_prob": "1/4"}}, "count": 10}, ...],
      "token_designs": [{"creator": "team", "good": true, "design": {<TokenDesign fields>}}, ...],
      "delegations": [{"from": "@team", "to": "@Curator:0", "amount": 10}]
    }

Probabilities are exact fractions written as strings (``"3/8"``).  Inside
designs and delegations, account fields may use references that are resolved
when the run starts:

* ``@team`` / ``@team:<k>``: the k-th team account (pre-seeded tokens);
* ``@<Policy>:<i>``: the i-th agent with that policy, in agent-list order;
* ``@key:Oracle:<i>``: the verification key held by the i-th Oracle agent.

Design entries with ``"creator": "team"`` are created at tick 0; every other
entry must be listed in exactly one ``Creator`` policy's ``designs_to_create``.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..codec import decode, variant
from ..engine import EngineConfig
from ..errors import InvalidConfig
from ..reputation import RepConfig
from ..tcr import TcrParams


def parse_prob(value, path: str) -> Fraction:
    try:
        p = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InvalidConfig(path, f"not an exact fraction: {value!r}") from None
    if not 0 <= p <= 1:
        raise InvalidConfig(path, f"probability {p} outside [0, 1]")
    return p


@variant()
class HonestClaimant:
    action_prob: str
    target_tokens: tuple = ()
    max_quantity: int = 1


@variant()
class FreeRider:
    claim_prob: str
    bad_proof_strategy: str = "none"  # none | digest | forge
    target_tokens: tuple = ()


@variant()
class Creator:
    designs_to_create: tuple
    create_tick: int = 1
    apply_listing: bool = True


@variant()
class Approver:
    honesty_prob: str = "1"


@variant()
class Curator:
    apply_prob: str = "0"
    challenge_prob: str = "0"
    vote_rule: str = "truthful"  # truthful | contrarian | abstain


@variant()
class Oracle:
    measurement_range: tuple = (0, 100)


POLICIES = (HonestClaimant, FreeRider, Creator, Approver, Curator, Oracle)
_PROB_FIELDS = {HonestClaimant: ("action_prob",), FreeRider: ("claim_prob",),
                Approver: ("honesty_prob",), Curator: ("apply_prob", "challenge_prob")}


@dataclass
class DesignEntry:
    design: dict  # raw design data, references unresolved
    creator: str = "team"
    good: bool = True


@dataclass
class ScenarioConfig:
    seed: int
    steps: int
    agents: list  # [(policy, count)]
    token_designs: list
    engine: EngineConfig = field(default_factory=EngineConfig)
    metrics_interval: int = 1
    team_size: int = 1
    delegations: list = field(default_factory=list)
    name: str = "scenario"
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def tcr_params(self) -> TcrParams:
        return self.engine.tcr

    @property
    def rep_config(self) -> RepConfig:
        return self.engine.rep

    def probabilities(self, policy) -> dict:
        return {f: Fraction(getattr(policy, f)) for f in _PROB_FIELDS.get(type(policy), ())}


def _uint(value, path, minimum=0) -> int:
    if type(value) is not int or value < minimum:
        raise InvalidConfig(path, f"expected an integer >= {minimum}, got {value!r}")
    return value


def _engine_config(data, path="engine") -> EngineConfig:
    if data is None:
        return EngineConfig()
    if not isinstance(data, dict):
        raise InvalidConfig(path, "expected an object")
    data = dict(data)
    try:
        rep = RepConfig(**data.pop("rep", {}))
        tcr = TcrParams(**data.pop("tcr", {}))
        cfg = EngineConfig(rep=rep, tcr=tcr, **data)
    except TypeError as exc:
        raise InvalidConfig(path, str(exc)) from None
    bad = cfg.violations()
    if bad:
        raise InvalidConfig(f"{path}.{bad[0]}", "invalid value")
    return cfg


def _policy(data, path):
    obj = decode(data) if isinstance(data, dict) else None
    if not isinstance(obj, POLICIES):
        raise InvalidConfig(path, f"unknown agent policy {data!r}")
    for f in _PROB_FIELDS.get(type(obj), ()):
        parse_prob(getattr(obj, f), f"{path}.{type(obj).TAG}.{f}")
    if isinstance(obj, FreeRider) and obj.bad_proof_strategy not in ("none", "digest", "forge"):
        raise InvalidConfig(f"{path}.FreeRider.bad_proof_strategy", obj.bad_proof_strategy)
    if isinstance(obj, Curator) and obj.vote_rule not in ("truthful", "contrarian", "abstain"):
        raise InvalidConfig(f"{path}.Curator.vote_rule", obj.vote_rule)
    if isinstance(obj, Oracle):
        lo, hi = obj.measurement_range
        if type(lo) is not int or type(hi) is not int or lo > hi:
            raise InvalidConfig(f"{path}.Oracle.measurement_range", "need integers lo <= hi")
    if isinstance(obj, HonestClaimant):
        _uint(obj.max_quantity, f"{path}.HonestClaimant.max_quantity", 1)
    if isinstance(obj, Creator):
        _uint(obj.create_tick, f"{path}.Creator.create_tick", 1)
    return obj


def scenario_from_data(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise InvalidConfig("", "scenario must be an object")
    raw = copy.deepcopy(data)
    seed = data.get("seed")
    if type(seed) is not int or not 0 <= seed < 2**64:
        raise InvalidConfig("seed", "expected an unsigned 64-bit integer")
    steps = _uint(data.get("steps"), "steps", 1)
    interval = _uint(data.get("metrics_interval", 1), "metrics_interval", 1)
    team_size = _uint(data.get("team_size", 1), "team_size", 1)

    agents = []
    for i, group in enumerate(data.get("agents") or []):
        path = f"agents[{i}]"
        if not isinstance(group, dict):
            raise InvalidConfig(path, "expected an object")
        agents.append((_policy(group.get("policy"), f"{path}.policy"),
                       _uint(group.get("count", 1), f"{path}.count", 1)))
    if not agents:
        raise InvalidConfig("agents", "at least one agent is required")

    entries = []
    for i, entry in enumerate(data.get("token_designs") or []):
        path = f"token_designs[{i}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("design"), dict):
            raise InvalidConfig(path, "expected an object with a design")
        entries.append(DesignEntry(entry["design"], entry.get("creator", "team"),
                                   bool(entry.get("good", True))))

    covered: dict[int, str] = {}
    for i, (policy, _) in enumerate(agents):
        if isinstance(policy, Creator):
            for d in policy.designs_to_create:
                path = f"agents[{i}].policy.Creator.designs_to_create"
                if type(d) is not int or not 0 <= d < len(entries):
                    raise InvalidConfig(path, f"no design entry {d!r}")
                if d in covered or entries[d].creator == "team":
                    raise InvalidConfig(path, f"design {d} has more than one creator")
                covered[d] = path
    for i, entry in enumerate(entries):
        if entry.creator != "team" and i not in covered:
            raise InvalidConfig(f"token_designs[{i}].creator", "no Creator agent creates this design")

    delegations = []
    for i, d in enumerate(data.get("delegations") or []):
        path = f"delegations[{i}]"
        if not isinstance(d, dict) or not {"from", "to", "amount"} <= set(d):
            raise InvalidConfig(path, "expected from/to/amount")
        delegations.append((d["from"], d["to"], _uint(d["amount"], f"{path}.amount")))

    return ScenarioConfig(seed=seed, steps=steps, agents=agents, token_designs=entries,
                          engine=_engine_config(data.get("engine")), metrics_interval=interval,
                          team_size=team_size, delegations=delegations,
                          name=str(data.get("name", "scenario")), raw=raw)


def load_scenario(path) -> ScenarioConfig:
    return scenario_from_data(json.loads(Path(path).read_text(encoding="utf-8")))


SCENARIO_DIR = Path(__file__).parent / "scenarios"


def builtin_scenario(name: str) -> ScenarioConfig:
    return load_scenario(SCENARIO_DIR / f"{name}.json")
