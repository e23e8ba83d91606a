"""Create a token, claim it, move it, burn it, and check the log.

Run: python3 demos/token_lifecycle.py
"""

from fin4 import Capped, Engine, TokenDesign, derive_account, verify_log

alice = derive_account("demo:alice")
bob = derive_account("demo:bob")

engine = Engine()
design = TokenDesign(name="Beach Cleanup", symbol="BEACH", supply=Capped(1000), burnable=True)
beach = engine.create_token(alice, design)
print(f"created token {beach} ({design.symbol}); alice REP = {engine.rep_of(alice)}")

# no verifiers: a claim is approved on submission and mints one unit
for _ in range(3):
    engine.submit_claim(bob, beach)
print(f"bob claimed 3 times: balance {engine.balance_of(beach, bob)}, REP {engine.rep_of(bob)}")

engine.transfer(beach, bob, alice, 1)
engine.burn_units(beach, bob, 1)
print(f"after transfer and burn: bob {engine.balance_of(beach, bob)}, alice "
      f"{engine.balance_of(beach, alice)}, supply {engine.total_supply(beach)}")

lines = engine.log.lines()
print(f"log: {len(lines)} records, head {engine.head[:16]}..., verify -> {verify_log(lines)}")
rebuilt = Engine.from_log(lines)
print(f"replayed engine has the same head: {rebuilt.head == engine.head}")
