import copy
import json
from fractions import Fraction

import pytest

from fin4 import errors
from fin4.simulation import config as simcfg
from fin4.simulation import runner
from fin4.simulation.metrics import replay
from fin4.simulation.rng import SplitMix64


def approver_scenario(**over):
    data = {
        "name": "approvers", "seed": 7, "steps": 40, "metrics_interval": 5,
        "agents": [
            {"policy": {"HonestClaimant": {"action_prob": "1/4"}}, "count": 8},
            {"policy": {"Approver": {"honesty_prob": "1"}}, "count": 3},
        ],
        "token_designs": [{"design": {"name": "Help", "symbol": "HELP", "verifiers": [
            {"DesignatedApprover": {"approver": "@Approver:0"}}]}}],
    }
    data.update(over)
    return data


def test_splitmix64_reference_vector():
    r = SplitMix64(1234567)
    assert [r.next_u64() for _ in range(5)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423,
        4593380528125082431, 16408922859458223821]


def test_rng_helpers_are_exact():
    r = SplitMix64(3)
    draws = [r.below(6) for _ in range(600)]
    assert set(draws) == set(range(6))
    assert not SplitMix64(1).chance(Fraction(0)) and SplitMix64(1).chance(Fraction(1))
    with pytest.raises(ValueError):
        SplitMix64(-1)


def test_one_step_with_idle_agents():
    data = approver_scenario(steps=1, metrics_interval=1, agents=[
        {"policy": {"HonestClaimant": {"action_prob": "0"}}, "count": 2}], token_designs=[])
    result = runner.run(data)
    types = [r.type for r in result.log]
    assert types == ["Genesis", "AdvanceTime"]
    (frame,) = result.frames
    assert (frame.tick, frame.claims_submitted, frame.claims_approved, frame.gov_supply) == (1, 0, 0, 0)
    assert replay(result.log.lines()) == result.frames


def test_deterministic_and_replayable():
    data = approver_scenario()
    a, b = runner.run(data), runner.run(copy.deepcopy(data))
    assert a.log.lines() == b.log.lines()
    assert a.frames == b.frames and len(a.frames) == 8
    assert replay(a.log.lines()) == a.frames
    assert a.summary()["claims_submitted"] > 0
    other = runner.run(approver_scenario(seed=8))
    assert other.head != a.head


def test_tampered_log_is_rejected_at_the_altered_record():
    lines = runner.run(approver_scenario()).log.lines()
    seq = len(lines) // 2
    rec = json.loads(lines[seq])
    rec["time"] += 1
    lines[seq] = json.dumps(rec, separators=(",", ":"), sort_keys=True)
    with pytest.raises(errors.CorruptLog) as exc:
        replay(lines)
    assert exc.value.seq == seq


def test_empty_replay():
    assert replay([]) == []


def test_honest_approver_contains_free_riders():
    base = approver_scenario(agents=[
        {"policy": {"HonestClaimant": {"action_prob": "1/4"}}, "count": 4},
        {"policy": {"FreeRider": {"claim_prob": "1/4"}}, "count": 4},
        {"policy": {"Approver": {"honesty_prob": "1"}}, "count": 1},
    ])
    grid = {"axes": [{"path": "agents[1].policy.FreeRider.claim_prob", "values": ["0", "1/2", "1"]}]}
    rows = runner.sweep(base, grid)
    assert [p["agents[1].policy.FreeRider.claim_prob"] for p, _ in rows] == ["0", "1/2", "1"]
    assert rows[0][1]["free_rider_submitted"] == 0
    assert rows[2][1]["free_rider_submitted"] > rows[1][1]["free_rider_submitted"] > 0
    for _, s in rows:
        assert s["free_rider_approved"] == 0


@pytest.mark.timed
def test_more_verifiers_lower_approval():
    # coin-flip approvers: each extra slot halves the expected approval rate
    base = approver_scenario(steps=60, agents=[
        {"policy": {"HonestClaimant": {"action_prob": "1/2"}}, "count": 10},
        {"policy": {"Approver": {"honesty_prob": "1/2"}}, "count": 3},
    ])
    slots = [{"DesignatedApprover": {"approver": f"@Approver:{i}"}} for i in range(3)]
    grid = {"axes": [{"path": "token_designs[0].design.verifiers",
                      "values": [slots[:k] for k in range(4)]}]}
    rows = runner.sweep(base, grid)
    rates = [Fraction(s["claims_approved"], s["claims_submitted"]) for _, s in rows]
    assert rates[0] == 1
    assert all(x >= y for x, y in zip(rates, rates[1:])), rates


def test_grid_of_one_equals_run_with_derived_seed():
    base = approver_scenario()
    (row,) = runner.sweep(base, {"points": [{}]})
    solo = runner.run(dict(base, seed=runner.derived_seed(7, 0))).summary()
    assert row[1] == solo
    assert runner.derived_seed(7, 0) != runner.derived_seed(7, 1)


def test_sweep_workers_match_serial():
    base = approver_scenario(steps=10)
    grid = {"axes": [{"path": "steps", "values": [5, 10]}]}
    assert runner.sweep(base, grid, workers=2) == runner.sweep(base, grid)


def test_sweep_csv_shape():
    rows = runner.sweep(approver_scenario(steps=5), {"axes": [{"path": "steps", "values": [3, 5]}]})
    lines = runner.sweep_csv(rows).splitlines()
    assert lines[0].startswith("index,steps,scenario,")
    assert len(lines) == 3


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d.update(seed=-1), "seed"),
    (lambda d: d.update(steps=0), "steps"),
    (lambda d: d.update(agents=[]), "agents"),
    (lambda d: d["agents"][0]["policy"]["HonestClaimant"].update(action_prob="3/2"),
     "agents[0].policy.HonestClaimant.action_prob"),
    (lambda d: d["agents"][0].update(policy={"Wizard": {}}), "agents[0].policy"),
    (lambda d: d.update(engine={"tcr": {"vote_quorum_pct": 101}}), "engine.tcr.vote_quorum_pct"),
    (lambda d: d.update(delegations=[{"from": "@team"}]), "delegations[0]"),
])
def test_invalid_config_names_the_path(mutate, path):
    data = approver_scenario()
    mutate(data)
    with pytest.raises(errors.InvalidConfig) as exc:
        runner.run(data)
    assert exc.value.path == path


def test_unresolvable_reference():
    data = approver_scenario(token_designs=[{"design": {"name": "X", "symbol": "X", "verifiers": [
        {"DesignatedApprover": {"approver": "@Approver:9"}}]}}])
    with pytest.raises(errors.InvalidConfig) as exc:
        runner.run(data)
    assert exc.value.path.startswith("token_designs[0].design")


def test_bad_grid_path():
    with pytest.raises(errors.InvalidConfig):
        runner.sweep(approver_scenario(), {"axes": [{"path": "nope.deeper", "values": [1]}]})
    with pytest.raises(errors.InvalidConfig):
        runner.sweep(approver_scenario(), {"axes": []})


def test_builtin_scenario_loads():
    cfg = simcfg.builtin_scenario("forum2019")
    assert cfg.name == "forum2019" and sum(n for _, n in cfg.agents) == 50
    assert len(cfg.token_designs) == 11


def test_forum_units_minted_equal_approvals():
    # every forum2019 design mints one unit per approved claim
    s = runner.run(simcfg.builtin_scenario("forum2019")).summary()
    assert s["units_minted"] == s["claims_approved"] > 0
    assert s["claims_approved"] + s["claims_rejected"] + s["claims_open"] == s["claims_submitted"]
