import random

import pytest
from hypothesis import given, settings, strategies as st

from fin4 import (GOV, Choice, CuratedStatus, ListingStatus, Outcome, ProposalKind, TcrParams,
                  commit_hash, errors, resolve_payouts)
from fin4.tcr import ESCROW

from conftest import A, B, C, D, acct, funded_engine
from oracles import (APPLICANT, CHALLENGER, VOTERS, brute_force_payouts, engine_poll,
                     tcr_exhaustive)

SALT = "11" * 32
PARAMS = TcrParams(min_deposit=10, apply_stage_ticks=5, commit_stage_ticks=5,
                   reveal_stage_ticks=5, vote_quorum_pct=50, dispensation_pct=50)


def listed_setup(gov_each=10):
    e = funded_engine(tcr=PARAMS, gov_each=gov_each)
    t = e.list_tokens()[0].id
    return e, t


def test_unchallenged_application_becomes_listed():
    e, t = listed_setup()
    e.apply_listing(A, t)
    assert e.effective_gov(A) == 0 and e.locked_gov(A) == 10
    assert e.get_token(t).curated_status is CuratedStatus.APPLIED
    e.advance_time(4)
    assert e.update_status(t) is ListingStatus.APPLIED
    e.advance_time(1)
    assert e.update_status(t) is ListingStatus.LISTED
    assert e.effective_gov(A) == 10 and e.locked_gov(A) == 0
    assert e.get_token(t).curated_status is CuratedStatus.LISTED
    assert [r.id for r in e.list_tokens(curated_only=True)] == [t]


def test_apply_errors():
    e, t = listed_setup()
    poor = acct("poor")
    with pytest.raises(errors.InsufficientGov):
        e.apply_listing(poor, t)
    e.apply_listing(A, t)
    with pytest.raises(errors.ListingExists):
        e.apply_listing(B, t)
    e.advance_time(5)
    e.update_status(t)
    with pytest.raises(errors.WrongKind):
        e.apply_listing(B, t, ProposalKind.ADD)


def test_challenge_boundary_and_errors():
    e, t = listed_setup()
    e.apply_listing(A, t)
    e.advance_time(4)  # last valid tick: deadline is 5
    pid = e.challenge(B, t)
    poll = e.get_poll(pid)
    assert (poll.commit_deadline, poll.reveal_deadline) == (9, 14)
    with pytest.raises(errors.AlreadyChallenged):
        e.challenge(C, t)
    e2, t2 = listed_setup()
    e2.apply_listing(A, t2)
    e2.advance_time(5)
    with pytest.raises(errors.NoActiveListing):
        e2.challenge(B, t2)


def test_challenge_removed_token_no_active_listing():
    e, t = listed_setup()
    e.apply_listing(A, t)
    pid = e.challenge(B, t)
    e.advance_time(10)
    assert e.resolve_poll(pid).outcome is Outcome.CHALLENGER_WINS
    assert e.get_listing(t).status is ListingStatus.REMOVED
    with pytest.raises(errors.NoActiveListing):
        e.challenge(C, t)


def test_self_challenge_allowed():
    e, t = listed_setup(gov_each=20)
    e.apply_listing(A, t)
    assert e.challenge(A, t) == 0


def test_commit_rules():
    e, t = listed_setup()
    e.apply_listing(A, t)
    pid = e.challenge(B, t)
    h = commit_hash(Choice.FOR, SALT, pid)
    with pytest.raises(errors.ZeroStake):
        e.commit_vote(C, pid, h, 0)
    with pytest.raises(errors.InsufficientGov):
        e.commit_vote(C, pid, h, 11)
    e.commit_vote(C, pid, h, 10)  # whole balance
    assert e.effective_gov(C) == 0 and e.locked_gov(C) == 10
    with pytest.raises(errors.DuplicateCommit):
        e.commit_vote(C, pid, h, 1)
    e.advance_time(5)
    with pytest.raises(errors.CommitClosed):
        e.commit_vote(D, pid, h, 1)
    with pytest.raises(errors.UnknownPoll):
        e.commit_vote(D, 7, h, 1)


def test_reveal_rules():
    e, t = listed_setup()
    e.apply_listing(A, t)
    pid = e.challenge(B, t)
    e.commit_vote(C, pid, commit_hash(Choice.AGAINST, SALT, pid), 4)
    with pytest.raises(errors.RevealTooEarly):
        e.reveal_vote(C, pid, Choice.AGAINST, SALT)
    e.advance_time(5)
    with pytest.raises(errors.HashMismatch):
        e.reveal_vote(C, pid, Choice.AGAINST, "22" * 32)
    with pytest.raises(errors.HashMismatch):
        e.reveal_vote(C, pid, Choice.FOR, SALT)
    with pytest.raises(errors.NoCommit):
        e.reveal_vote(D, pid, Choice.FOR, SALT)
    assert C not in e.get_poll(pid).reveals
    e.reveal_vote(C, pid, Choice.AGAINST, SALT)
    with pytest.raises(errors.DuplicateReveal):
        e.reveal_vote(C, pid, Choice.AGAINST, SALT)
    with pytest.raises(errors.PollNotEnded):
        e.resolve_poll(pid)
    e.advance_time(5)
    with pytest.raises(errors.RevealClosed):
        e.reveal_vote(C, pid, Choice.AGAINST, SALT)
    res = e.resolve_poll(pid)
    assert res.outcome is Outcome.CHALLENGER_WINS and res.against_weight == 4
    with pytest.raises(errors.AlreadyResolved):
        e.resolve_poll(pid)


def test_commit_hash_independent():
    import hashlib
    want = hashlib.sha256(b"\x01" + bytes.fromhex(SALT) + b"12").hexdigest()
    assert commit_hash("For", SALT, 12) == want
    want = hashlib.sha256(b"\x00" + bytes.fromhex(SALT) + b"0").hexdigest()
    assert commit_hash(Choice.AGAINST, SALT, 0) == want


def test_zero_reveals_challenger_gets_dispensation():
    e, t = listed_setup()
    e.apply_listing(A, t)
    pid = e.challenge(B, t)
    e.advance_time(10)
    res = e.resolve_poll(pid)
    assert res.outcome is Outcome.CHALLENGER_WINS
    d = 10 * PARAMS.dispensation_pct // 100
    assert (B, d, "dispensation") in res.awards
    # no winning voters: the rest also goes to the challenger
    assert e.balance_of(GOV, B) == 20 and e.balance_of(GOV, A) == 0
    assert e.get_token(t).curated_status is CuratedStatus.NOT_LISTED


def test_tie_at_quorum_50_listing_wins():
    r = resolve_payouts([(VOTERS[0], "For", 3), (VOTERS[1], "Against", 3)], quorum_pct=50,
                        dispensation_pct=50, applicant=APPLICANT, challenger=CHALLENGER,
                        listing_deposit=10, challenger_deposit=10)
    assert r.outcome is Outcome.LISTING_WINS


def test_thirty_ten_example():
    v30, v10 = VOTERS[0], VOTERS[1]
    kwargs = dict(quorum_pct=50, dispensation_pct=50, applicant=APPLICANT, challenger=CHALLENGER,
                  listing_deposit=100, challenger_deposit=100)
    r = resolve_payouts([(v30, "Against", 30), (v10, "Against", 10)], **kwargs)
    assert sorted(r.awards) == sorted([(CHALLENGER, 50, "dispensation"), (v30, 38, "voter"),
                                       (v10, 12, "voter")])
    expected = brute_force_payouts([(v30, "Against", 30), (v10, "Against", 10)], quorum=50,
                                   dispensation=50, applicant=APPLICANT, challenger=CHALLENGER,
                                   dep_a=100, dep_c=100)
    assert expected[3] == sorted(r.awards)


def test_residue_tie_goes_to_lowest_account():
    lo, hi = sorted([VOTERS[2], VOTERS[3]])
    r = resolve_payouts([(hi, "For", 2), (lo, "For", 2)], quorum_pct=50, dispensation_pct=0,
                        applicant=APPLICANT, challenger=CHALLENGER, listing_deposit=10,
                        challenger_deposit=5)
    assert dict((a, n) for a, n, _ in r.awards) == {lo: 3, hi: 2}


def test_exhaustive_small_polls():
    cases, bad = tcr_exhaustive(resolve_payouts, max_voters=3, deposits=(7, 10))
    assert cases == 9 * (1 + 12 + 144 + 1728) and bad == []


def test_engine_route_matches_oracle_sample():
    rng = random.Random(11)
    for _ in range(60):
        k = rng.randint(0, 5)
        voters = [(VOTERS[i], rng.choice(["For", "Against", None]), rng.randint(1, 4)) for i in range(k)]
        q, d = rng.choice([0, 50, 100]), rng.choice([0, 50, 100])
        got = engine_poll(voters, quorum=q, dispensation=d)
        want = brute_force_payouts(voters, quorum=q, dispensation=d, applicant=APPLICANT,
                                   challenger=CHALLENGER, dep_a=10, dep_c=10)
        assert got == want


def test_challenge_listed_token_and_removal_proposal():
    e, t = listed_setup(gov_each=20)
    e.apply_listing(A, t)
    e.advance_time(5)
    e.update_status(t)
    # defend a listed entry: the owner stakes nothing
    pid = e.challenge(B, t)
    assert e.get_poll(pid).listing_deposit == 0
    e.commit_vote(C, pid, commit_hash(Choice.FOR, SALT, pid), 5)
    e.advance_time(5)
    e.reveal_vote(C, pid, Choice.FOR, SALT)
    e.advance_time(5)
    res = e.resolve_poll(pid)
    assert res.outcome is Outcome.LISTING_WINS
    assert e.get_token(t).curated_status is CuratedStatus.LISTED
    assert e.balance_of(GOV, B) == 10  # lost its challenge deposit
    # removal proposal, unchallenged
    e.apply_listing(D, t, ProposalKind.REMOVE)
    assert e.get_token(t).curated_status is CuratedStatus.LISTED
    e.advance_time(5)
    e.update_status(t)
    assert e.get_token(t).curated_status is CuratedStatus.NOT_LISTED
    assert e.get_listing(t).status is ListingStatus.REMOVED
    assert e.locked_gov(D) == 0


def test_hiding_commit_events_reveal_nothing():
    e, t = listed_setup()
    e.apply_listing(A, t)
    pid = e.challenge(B, t)
    e.commit_vote(C, pid, commit_hash(Choice.FOR, SALT, pid), 5)
    e.commit_vote(D, pid, commit_hash(Choice.AGAINST, "33" * 32, pid), 5)
    commits = [r.event for r in e.log if r.type == "VoteCommitted"]
    for ev in commits:
        assert "choice" not in ev and "salt" not in ev
    assert {ev["stake"] for ev in commits} == {5}
    view = e.poll_view(pid)
    assert "reveals" not in view and all("For" not in str(v) for v in view.values())


STAGE_OPS = st.lists(st.tuples(st.sampled_from(["apply", "remove", "challenge", "touch", "commit",
                                                  "reveal", "resolve", "tick"]),
                               st.integers(0, 3), st.integers(1, 3), st.booleans()),
                     max_size=60)

ALLOWED = {
    None: {ListingStatus.APPLIED},
    ListingStatus.APPLIED: {ListingStatus.LISTED, ListingStatus.CHALLENGED},
    ListingStatus.CHALLENGED: {ListingStatus.LISTED, ListingStatus.REMOVED},
    ListingStatus.LISTED: {ListingStatus.APPLIED, ListingStatus.CHALLENGED},
    ListingStatus.REMOVED: {ListingStatus.APPLIED},
}


@settings(max_examples=60, deadline=None)
@given(STAGE_OPS)
def test_listing_state_machine_and_gov_conservation(ops):
    accounts = [A, B, C, D]
    e = funded_engine(tcr=TcrParams(min_deposit=3, apply_stage_ticks=2, commit_stage_ticks=2,
                                    reveal_stage_ticks=2), gov_each=10)
    t = 0
    total = e.total_supply(GOV)
    secrets = {}
    prev = None
    for kind, who, n, flag in ops:
        a = accounts[who]
        try:
            if kind == "apply":
                e.apply_listing(a, t, ProposalKind.ADD)
            elif kind == "remove":
                e.apply_listing(a, t, ProposalKind.REMOVE)
            elif kind == "challenge":
                e.challenge(a, t)
            elif kind == "touch":
                e.update_status(t)
            elif kind == "commit" and e.state.polls:
                pid = len(e.state.polls) - 1
                choice = Choice.FOR if flag else Choice.AGAINST
                salt = f"{who:02x}" * 32
                e.commit_vote(a, pid, commit_hash(choice, salt, pid), n)
                secrets[(a, pid)] = (choice, salt)
            elif kind == "reveal" and (a, len(e.state.polls) - 1) in secrets:
                pid = len(e.state.polls) - 1
                e.reveal_vote(a, pid, *secrets[(a, pid)])
            elif kind == "resolve" and e.state.polls:
                e.resolve_poll(len(e.state.polls) - 1)
            elif kind == "tick":
                e.advance_time(n)
        except errors.Fin4Error:
            pass
        listing = e.get_listing(t)
        status = listing.status if listing else None
        if status is not prev:
            assert status in ALLOWED[prev], (prev, status)
            prev = status
        assert e.total_supply(GOV) == total
        assert sum(e.effective_gov(x) + e.locked_gov(x) for x in accounts + [ESCROW]) == total
        assert e.balance_of(GOV, ESCROW) == 0
