"""Run the bundled forum scenario, replay its log, and sweep one parameter.

Run: python3 demos/forum_simulation.py
"""

from fin4.simulation import builtin_scenario, replay, run, sweep

config = builtin_scenario("forum2019")
result = run(config)
summary = result.summary()
print(f"{summary['claims_submitted']} claims, {summary['claims_approved']} approved "
      f"(ratio {summary['approval_ratio']}), {summary['free_rider_approved']} of "
      f"{summary['free_rider_submitted']} free-rider claims slipped through")
print(f"{summary['curated']} tokens curated after {summary['polls']} polls; "
      f"log of {summary['log_records']} records")

frames = replay(result.log.lines())
print(f"metrics rebuilt from the log match the live run: {frames == result.frames}")
for frame in frames:
    print(f"  tick {frame.tick:2d}: {frame.claims_submitted:3d} submitted, "
          f"{frame.claims_approved:3d} approved, GOV supply {frame.gov_supply}")

grid = {"axes": [{"path": "agents[10].policy.Approver.honesty_prob", "values": ["1/2", "3/4", "1"]}]}
for point, row in sweep(config, grid):
    print(f"approver honesty {point['agents[10].policy.Approver.honesty_prob']:>3}: "
          f"approval ratio {row['approval_ratio']}, free riders approved {row['free_rider_approved']}")
