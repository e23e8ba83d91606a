import pytest

from fin4 import (All, Capped, ClaimWindow, CreationCondition, CuratedStatus, DesignatedApprover,
                  Engine, FixedPerClaim, Partial, PeerQuorum, ProportionalToQuantity, REP,
                  SwapPool, TokenDesign, design_from_data, errors, validate_design)
from fin4.codec import encode

from conftest import A, B, C, plain_design


def test_well_formed_design_ok():
    d = plain_design(verifiers=(DesignatedApprover(B),))
    assert validate_design(d) == []


@pytest.mark.parametrize("cond", [CreationCondition.CONSENSUS, CreationCondition.BOTH])
def test_consensus_conditions_unsupported(cond):
    assert validate_design(plain_design(creation_condition=cond)) == ["CreationConditionUnsupported"]


def test_premint_exceeds_cap():
    d = plain_design(supply=Capped(10), unconditional_creation=Partial(20, A))
    assert validate_design(d) == ["PreMintExceedsCap"]
    assert validate_design(plain_design(supply=Capped(20), unconditional_creation=Partial(20, A))) == []


@pytest.mark.parametrize("changes, code", [
    ({"symbol": "toolong123"}, "InvalidSymbol"),
    ({"symbol": ""}, "InvalidSymbol"),
    ({"symbol": "abc"}, "InvalidSymbol"),
    ({"name": ""}, "InvalidName"),
    ({"minting_policy": FixedPerClaim(0)}, "InvalidMintingPolicy"),
    ({"minting_policy": ProportionalToQuantity(0)}, "InvalidMintingPolicy"),
    ({"unconditional_creation": All(5, A), "verifiers": (DesignatedApprover(B),)},
     "VerifiersOnPreMintedToken"),
    ({"verifiers": (PeerQuorum((A, B), 3),)}, "InvalidVerifier"),
    ({"verifiers": (ClaimWindow(1, 0),)}, "InvalidVerifier"),
    ({"burnable": 1}, "InvalidFlag"),
])
def test_violations_listed(changes, code):
    assert code in validate_design(plain_design().replace(**changes))


def test_all_violations_reported_together():
    d = plain_design(symbol="x", supply=Capped(1), unconditional_creation=Partial(2, A),
                     minting_policy=FixedPerClaim(0))
    assert set(validate_design(d)) == {"InvalidSymbol", "PreMintExceedsCap", "InvalidMintingPolicy"}


def test_create_token_sequential_ids_and_rep(engine):
    assert engine.list_tokens() == []
    assert engine.create_token(A, plain_design("AAA")) == 0
    assert engine.balance_of(REP, A) == engine.config.rep.rep_per_creation
    assert engine.create_token(A, plain_design("BBB")) == 1
    assert engine.create_token(B, plain_design("CCC")) == 2
    assert [t.id for t in engine.list_tokens()] == [0, 1, 2]
    assert engine.balance_of(REP, A) == 200 and engine.balance_of(REP, B) == 100
    rec = engine.get_token(1)
    assert rec.creator == A and rec.curated_status is CuratedStatus.NOT_LISTED and rec.created_at == 0


def test_invalid_design_error_carries_violations(engine):
    with pytest.raises(errors.InvalidDesign) as exc:
        engine.create_token(A, plain_design(creation_condition=CreationCondition.CONSENSUS))
    assert exc.value.violations == ["CreationConditionUnsupported"]
    assert len(engine.log) == 1


def test_premint_executed(engine):
    t = engine.create_token(A, plain_design(unconditional_creation=Partial(7, B)))
    assert engine.balance_of(t, B) == 7 and engine.total_supply(t) == 7
    u = engine.create_token(A, plain_design("ALL", supply=Capped(50), unconditional_creation=All(50, C)))
    assert engine.total_supply(u) == 50
    with pytest.raises(errors.TokenNotClaimable):
        engine.submit_claim(B, u)


def test_get_token_unknown(engine):
    with pytest.raises(errors.UnknownToken):
        engine.get_token(0)


def test_eleven_tokens_ids_0_to_10():
    e = Engine()
    team, members = A, [B, C]
    for i in range(4):
        e.create_token(team, plain_design("TEAM" + "ABCD"[i]))
    for i in range(7):
        e.create_token(members[i % 2], plain_design("MEM" + "ABCDEFG"[i]))
    assert [t.id for t in e.list_tokens()] == list(range(11))
    assert sum(t.creator != team for t in e.list_tokens()) == 7


def test_permissionless_unlimited_creation(engine):
    ids = [engine.create_token(A, plain_design("SAME")) for _ in range(5)]
    assert ids == list(range(5))
    # independent ledgers
    engine.mint_units(ids[0], B, 3)
    assert [engine.total_supply(i) for i in ids] == [3, 0, 0, 0, 0]


def test_reference_checks(engine):
    with pytest.raises(errors.InvalidDesign) as exc:
        engine.create_token(A, plain_design(sources_of_value=(SwapPool(0),)))
    assert exc.value.violations == ["SelfBacking"]
    with pytest.raises(errors.InvalidDesign) as exc:
        engine.create_token(A, plain_design(sources_of_value=(SwapPool(7),)))
    assert exc.value.violations == ["UnknownReferencedToken"]


def test_design_roundtrip_through_data():
    d = plain_design(supply=Capped(9), verifiers=(DesignatedApprover(B), ClaimWindow(1, 5)),
                     minting_policy=ProportionalToQuantity(2))
    assert design_from_data(encode(d)) == d
    # the bare field form (no variant wrapper) with defaults
    bare = design_from_data({"name": "X", "symbol": "X"})
    assert bare == TokenDesign("X", "X")


def test_design_immutable():
    d = plain_design()
    with pytest.raises(Exception):
        d.symbol = "OTHER"
