"""Claims against a design that combines a designated approver and a signed sensor.

Run: python3 demos/claims_and_verifiers.py
"""

from fin4 import (Approval, Attestation, Comparator, DesignatedApprover, Engine, SensorOracle,
                  TokenDesign, derive_account, sign_measurement)
from fin4.signing import derive_seed, public_key

claimant = derive_account("demo:claimant")
teacher = derive_account("demo:teacher")
sensor_seed = derive_seed("demo:air-sensor")

engine = Engine()
design = TokenDesign(
    name="Clean Air Commute", symbol="AIR",
    verifiers=(DesignatedApprover(teacher),
               SensorOracle(public_key(sensor_seed), Comparator.GE, 50)))
air = engine.create_token(teacher, design)

good = engine.submit_claim(claimant, air)
engine.submit_attestation(Attestation(good, 0, Approval(teacher, True)))
engine.submit_attestation(sign_measurement(sensor_seed, good, 1, 72))
print(f"claim {good}: {engine.get_claim(good).status.value}, balance {engine.balance_of(air, claimant)}")

bad = engine.submit_claim(claimant, air)
engine.submit_attestation(Attestation(bad, 0, Approval(teacher, True)))
engine.submit_attestation(sign_measurement(sensor_seed, bad, 1, 41))
claim = engine.get_claim(bad)
print(f"claim {bad}: {claim.status.value} (sensor slot: {claim.slots[1].reason})")

forged = engine.submit_claim(claimant, air)
try:
    engine.submit_attestation(sign_measurement(derive_seed("demo:forger"), forged, 1, 99))
except Exception as exc:
    print(f"forged reading on claim {forged}: {type(exc).__name__}")
print(f"claim {forged} is still {engine.get_claim(forged).status.value}")
