"""Curate a token through an application, a challenge and a commit-reveal vote.

Run: python3 demos/curation.py
"""

from fin4 import (GOV, Choice, Engine, EngineConfig, RepConfig, TcrParams, TokenDesign,
                  commit_hash, derive_account)

people = {name: derive_account(f"demo:{name}") for name in
          ("owner", "critic", "voter1", "voter2", "voter3")}
params = TcrParams(min_deposit=10, apply_stage_ticks=3, commit_stage_ticks=3,
                   reveal_stage_ticks=3, vote_quorum_pct=50, dispensation_pct=50)
engine = Engine(EngineConfig(rep=RepConfig(rep_per_claim=100), tcr=params))

# everyone earns REP with one approved claim and turns it into 10 GOV
setup = engine.create_token(people["owner"], TokenDesign("Starter", "START"))
for acct in people.values():
    engine.submit_claim(acct, setup)
    engine.claim_gov(acct)

token = engine.create_token(people["owner"], TokenDesign("Repair Cafe", "REPAIR"))
engine.apply_listing(people["owner"], token)
poll = engine.challenge(people["critic"], token)
print(f"token {token} applied and challenged, poll {poll}")

votes = {"voter1": (Choice.FOR, 8), "voter2": (Choice.FOR, 3), "voter3": (Choice.AGAINST, 5)}
salts = {}
for name, (choice, stake) in votes.items():
    salts[name] = f"{len(salts) + 1:02x}" * 32
    engine.commit_vote(people[name], poll, commit_hash(choice, salts[name], poll), stake)
engine.advance_time(3)
for name, (choice, _) in votes.items():
    engine.reveal_vote(people[name], poll, choice, salts[name])
engine.advance_time(3)

result = engine.resolve_poll(poll)
print(f"outcome {result.outcome.value}: for {result.for_weight}, against {result.against_weight}")
for account, amount, role in result.awards:
    name = next(n for n, a in people.items() if a == account)
    print(f"  {name:7s} +{amount} GOV ({role})")
print(f"curated status: {engine.get_token(token).curated_status.value}")
print("GOV balances:", {n: engine.balance_of(GOV, a) for n, a in people.items()})
