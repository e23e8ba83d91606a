"""Back a token with a swap pool, a mint conversion and a coupled burn.

Run: python3 demos/backing.py
"""

from fin4 import (CoupledBurn, Engine, MintConversion, SwapPool, TokenDesign, derive_account,
                  reserve_account)

sponsor = derive_account("demo:sponsor")
ana = derive_account("demo:ana")
ben = derive_account("demo:ben")
engine = Engine()

euro = engine.create_token(sponsor, TokenDesign("Euro voucher", "EUR"))
trees = engine.create_token(sponsor, TokenDesign("Tree Planting", "TREE",
                                                 sources_of_value=[SwapPool(euro)]))
engine.mint_units(euro, sponsor, 100)
engine.deposit_to_pool(sponsor, trees, 100)
engine.submit_claim(ana, trees, 1)
engine.submit_claim(ana, trees, 1)
engine.submit_claim(ben, trees, 1)
print(f"pool {engine.pool(trees).balance} EUR for {engine.total_supply(trees)} TREE")
print(f"ana redeems 2 -> {engine.swap_redeem(ana, trees, 2)} EUR")
print(f"ben redeems 1 -> {engine.swap_redeem(ben, trees, 1)} EUR, pool now {engine.pool(trees).balance}")

points = engine.create_token(sponsor, TokenDesign("Points", "PTS"))
steps = engine.create_token(sponsor, TokenDesign("Steps", "STEP", burnable=True,
                                                 sources_of_value=[MintConversion(points, 2, 3)]))
engine.submit_claim(ana, steps, 1)
engine.mint_units(steps, ana, 9)
print(f"ana converts 10 STEP -> {engine.mint_convert(ana, steps, 10)} PTS")

carbon = engine.create_token(sponsor, TokenDesign("Carbon credit", "CO", burnable=True))
offset = engine.create_token(sponsor, TokenDesign("Offset", "OFF", burnable=True,
                                                  sources_of_value=[CoupledBurn(carbon)]))
engine.mint_units(carbon, reserve_account(offset), 2)
engine.mint_units(offset, ben, 3)
engine.coupled_burn(ben, offset, 2)
print(f"ben burned 2 OFF, reserve CO left {engine.balance_of(carbon, reserve_account(offset))}")
try:
    engine.coupled_burn(ben, offset, 1)
except Exception as exc:
    print(f"third burn: {type(exc).__name__}; ben still holds {engine.balance_of(offset, ben)} OFF")
