"""Token-curated registry over PATs with staked commit-reveal voting.

Stages are half-open tick intervals: an application can be challenged while
``now < deadline``; votes are committed while ``now < commit_deadline`` and
revealed while ``commit_deadline <= now < reveal_deadline``; a poll resolves
once ``now >= reveal_deadline``.

Resolution (``For`` backs the applicant's proposal):

* no revealed weight -> challenger wins;
* otherwise the proposal wins iff ``F * 100 >= (F + A) * vote_quorum_pct``.

The loser's deposit ``D`` is split: ``floor(D * dispensation_pct / 100)`` to
the winning party, the rest pro rata by stake among revealed voters on the
winning side (floor, residue to the largest staker, ties to the lowest
account id).  With no such voters the rest also goes to the winning party
(award role ``unclaimed``).
Voter stakes are weights and always come back.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import errors
from .codec import variant
from .ledger import GOV, check_account, command, derive_account, is_account
from .tokens import CuratedStatus

ESCROW = derive_account("fin4:tcr-escrow")


class ProposalKind(str, Enum):
    ADD = "AddToList"
    REMOVE = "RemoveFromList"


class ListingStatus(str, Enum):
    APPLIED = "Applied"
    LISTED = "Listed"
    CHALLENGED = "Challenged"
    REMOVED = "Removed"


class Choice(str, Enum):
    FOR = "For"
    AGAINST = "Against"


class Outcome(str, Enum):
    UNRESOLVED = "Unresolved"
    LISTING_WINS = "ListingWins"
    CHALLENGER_WINS = "ChallengerWins"


@variant()
class TcrParams:
    min_deposit: int = 10
    apply_stage_ticks: int = 100
    commit_stage_ticks: int = 100
    reveal_stage_ticks: int = 100
    vote_quorum_pct: int = 50
    dispensation_pct: int = 50

    def violations(self) -> list[str]:
        out = []
        if type(self.min_deposit) is not int or self.min_deposit < 0:
            out.append("min_deposit")
        for name in ("apply_stage_ticks", "commit_stage_ticks", "reveal_stage_ticks"):
            v = getattr(self, name)
            if type(v) is not int or v < 1:
                out.append(name)
        for name in ("vote_quorum_pct", "dispensation_pct"):
            v = getattr(self, name)
            if type(v) is not int or not 0 <= v <= 100:
                out.append(name)
        return out


@dataclass
class Listing:
    token: int
    applicant: str
    deposit: int
    status: ListingStatus
    kind: ProposalKind
    deadline: int | None = None
    poll: int | None = None
    owner: str | None = None  # account the Listed entry belongs to

    @property
    def active(self) -> bool:
        return self.status in (ListingStatus.APPLIED, ListingStatus.CHALLENGED)


@dataclass
class TcrPoll:
    id: int
    token: int
    applicant: str
    listing_deposit: int
    challenger: str
    challenger_deposit: int
    commit_deadline: int
    reveal_deadline: int
    commits: dict = field(default_factory=dict)  # voter -> (commit_hash, stake)
    reveals: dict = field(default_factory=dict)  # voter -> Choice
    outcome: Outcome = Outcome.UNRESOLVED


def commit_hash(choice, salt_hex: str, poll_id: int) -> str:
    """sha256(choice_byte || salt || decimal(poll id)); For = 0x01, Against = 0x00."""
    choice = Choice(choice)
    salt = bytes.fromhex(salt_hex)
    if len(salt) != 32:
        raise ValueError("salt must be 32 bytes")
    data = (b"\x01" if choice is Choice.FOR else b"\x00") + salt + str(poll_id).encode("ascii")
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class Resolution:
    outcome: Outcome
    for_weight: int
    against_weight: int
    winner: str
    loser: str
    forfeited: int
    awards: tuple  # ((account, amount, role), ...)


def resolve_payouts(reveals: Sequence[tuple], *, quorum_pct: int, dispensation_pct: int,
                    applicant: str, challenger: str,
                    listing_deposit: int, challenger_deposit: int) -> Resolution:
    """Pure outcome and payout rule for one poll.

    ``reveals`` holds ``(voter, choice, stake)`` for every revealed vote.
    Returned awards distribute exactly the loser's deposit.
    """
    f = a = 0
    for _, c, s in reveals:
        if c == Choice.FOR:
            f += s
        elif c == Choice.AGAINST:
            a += s
        else:
            raise ValueError(f"not a vote choice: {c!r}")
    if f + a > 0 and f * 100 >= (f + a) * quorum_pct:
        outcome, side = Outcome.LISTING_WINS, Choice.FOR
        winner, loser, pot = applicant, challenger, challenger_deposit
    else:
        outcome, side = Outcome.CHALLENGER_WINS, Choice.AGAINST
        winner, loser, pot = challenger, applicant, listing_deposit

    share = pot * dispensation_pct // 100
    rest = pot - share
    awards = [(winner, share, "dispensation")] if share else []
    voters = [(v, s) for v, c, s in reveals if c == side]
    total = sum(s for _, s in voters)
    if rest and total:
        cuts = {v: rest * s // total for v, s in voters}
        top = min(voters, key=lambda vs: (-vs[1], vs[0]))[0]
        cuts[top] += rest - sum(cuts.values())
        awards.extend((v, cuts[v], "voter") for v, _ in sorted(voters) if cuts[v])
    elif rest:
        awards.append((winner, rest, "unclaimed"))
    return Resolution(outcome, f, a, winner, loser, pot, tuple(awards))


class TcrOps:
    """Registry commands.  Mixed into ``Engine``."""

    @property
    def tcr_params(self) -> TcrParams:
        return self.config.tcr

    def get_listing(self, token: int) -> Listing | None:
        return self.state.listings.get(token)

    def get_poll(self, poll_id: int) -> TcrPoll:
        if type(poll_id) is not int or not 0 <= poll_id < len(self.state.polls):
            raise errors.UnknownPoll(f"unknown poll {poll_id!r}")
        return self.state.polls[poll_id]

    def poll_view(self, poll_id: int) -> dict:
        """Public view of a poll: stakes only, revealed choices once revealed."""
        p = self.get_poll(poll_id)
        return {"id": p.id, "token": p.token, "challenger": p.challenger,
                "commit_deadline": p.commit_deadline, "reveal_deadline": p.reveal_deadline,
                "stakes": {v: s for v, (_, s) in p.commits.items()},
                "revealed": sorted(p.reveals), "outcome": p.outcome}

    def _set_listing(self, listing: Listing) -> None:
        self.state.listings[listing.token] = listing
        self._emit("ListingStatus", token=listing.token, status=listing.status,
                   kind=listing.kind, applicant=listing.applicant, deposit=listing.deposit)

    @command("ApplyListing")
    def apply_listing(self, applicant: str, token: int, kind=ProposalKind.ADD) -> None:
        check_account(applicant)
        kind = ProposalKind(kind)
        record = self.get_token(token)
        current = self.state.listings.get(token)
        if current is not None and current.active:
            raise errors.ListingExists(f"token {token} already has an active listing")
        listed = record.curated_status is CuratedStatus.LISTED
        if (kind is ProposalKind.ADD) == listed:
            raise errors.WrongKind(f"{kind.value} on a token that is {record.curated_status.value}")
        deposit = self.tcr_params.min_deposit
        self._lock_gov(applicant, deposit)
        owner = current.owner if (listed and current is not None) else applicant
        self._set_listing(Listing(token, applicant, deposit, ListingStatus.APPLIED, kind,
                                  deadline=self.state.tick + self.tcr_params.apply_stage_ticks,
                                  owner=owner))
        if kind is ProposalKind.ADD:
            self._set_curated(token, CuratedStatus.APPLIED)

    @command("UpdateStatus")
    def update_status(self, token: int) -> ListingStatus | None:
        """Promote an unchallenged application whose stage has ended."""
        self.get_token(token)
        listing = self.state.listings.get(token)
        if listing is None:
            return None
        if listing.status is ListingStatus.APPLIED and self.state.tick >= listing.deadline:
            self._unlock_gov(listing.applicant, listing.deposit)
            self._conclude(listing, proposal_passed=True)
        return self.state.listings[token].status

    @command("Challenge")
    def challenge(self, challenger: str, token: int) -> int:
        check_account(challenger)
        self.get_token(token)
        listing = self.state.listings.get(token)
        if listing is None or listing.status is ListingStatus.REMOVED:
            raise errors.NoActiveListing(f"token {token} has no listing to challenge")
        if listing.status is ListingStatus.CHALLENGED:
            raise errors.AlreadyChallenged(f"token {token} is already challenged")
        if listing.status is ListingStatus.APPLIED and self.state.tick >= listing.deadline:
            raise errors.NoActiveListing(f"application for token {token} has passed its deadline")
        params = self.tcr_params
        self._lock_gov(challenger, params.min_deposit)
        pid = len(self.state.polls)
        commit_deadline = self.state.tick + params.commit_stage_ticks
        poll = TcrPoll(pid, token, listing.applicant, listing.deposit, challenger,
                       params.min_deposit, commit_deadline,
                       commit_deadline + params.reveal_stage_ticks)
        self.state.polls.append(poll)
        self._emit("PollOpened", poll=pid, token=token, challenger=challenger,
                   commit_deadline=poll.commit_deadline, reveal_deadline=poll.reveal_deadline)
        if listing.status is ListingStatus.LISTED:
            # defending an existing entry: its owner is the applicant side, no deposit at risk
            listing = Listing(token, listing.owner or listing.applicant, 0,
                              ListingStatus.LISTED, ProposalKind.ADD, owner=listing.owner)
        listing.status = ListingStatus.CHALLENGED
        listing.poll = pid
        self._set_listing(listing)
        if listing.kind is ProposalKind.ADD and self.state.tokens[token].curated_status is CuratedStatus.APPLIED:
            self._set_curated(token, CuratedStatus.CHALLENGED)
        return pid

    @command("CommitVote")
    def commit_vote(self, voter: str, poll_id: int, commit_hash: str, stake: int) -> None:
        check_account(voter)
        poll = self.get_poll(poll_id)
        if self.state.tick >= poll.commit_deadline:
            raise errors.CommitClosed(f"poll {poll_id} commit stage ended")
        if not is_account(commit_hash):
            raise ValueError("commit hash must be 64 lowercase hex chars")
        if type(stake) is not int or stake < 1:
            raise errors.ZeroStake("stake must be >= 1")
        if voter in poll.commits:
            raise errors.DuplicateCommit(f"{voter[:12]}.. already committed")
        self._lock_gov(voter, stake)
        poll.commits[voter] = (commit_hash, stake)
        self._emit("VoteCommitted", poll=poll_id, voter=voter, commit_hash=commit_hash, stake=stake)

    @command("RevealVote")
    def reveal_vote(self, voter: str, poll_id: int, choice, salt: str) -> None:
        check_account(voter)
        choice = Choice(choice)
        poll = self.get_poll(poll_id)
        now = self.state.tick
        if now < poll.commit_deadline:
            raise errors.RevealTooEarly(f"poll {poll_id} still in commit stage")
        if now >= poll.reveal_deadline:
            raise errors.RevealClosed(f"poll {poll_id} reveal stage ended")
        if voter not in poll.commits:
            raise errors.NoCommit(f"{voter[:12]}.. did not commit")
        if voter in poll.reveals:
            raise errors.DuplicateReveal(f"{voter[:12]}.. already revealed")
        if commit_hash(choice, salt, poll_id) != poll.commits[voter][0]:
            raise errors.HashMismatch("choice and salt do not match the commitment")
        poll.reveals[voter] = choice
        self._emit("VoteRevealed", poll=poll_id, voter=voter, choice=choice,
                   weight=poll.commits[voter][1])

    @command("ResolvePoll")
    def resolve_poll(self, poll_id: int) -> Resolution:
        poll = self.get_poll(poll_id)
        if poll.outcome is not Outcome.UNRESOLVED:
            raise errors.AlreadyResolved(f"poll {poll_id} already resolved")
        if self.state.tick < poll.reveal_deadline:
            raise errors.PollNotEnded(f"poll {poll_id} reveal stage ends at {poll.reveal_deadline}")
        params = self.tcr_params
        reveals = [(v, c, poll.commits[v][1]) for v, c in sorted(poll.reveals.items())]
        res = resolve_payouts(reveals, quorum_pct=params.vote_quorum_pct,
                              dispensation_pct=params.dispensation_pct,
                              applicant=poll.applicant, challenger=poll.challenger,
                              listing_deposit=poll.listing_deposit,
                              challenger_deposit=poll.challenger_deposit)
        for voter in sorted(poll.commits):
            self._unlock_gov(voter, poll.commits[voter][1])
        if res.outcome is Outcome.LISTING_WINS:
            self._unlock_gov(poll.applicant, poll.listing_deposit)
            self._forfeit_gov(poll.challenger, poll.challenger_deposit, ESCROW)
        else:
            self._unlock_gov(poll.challenger, poll.challenger_deposit)
            self._forfeit_gov(poll.applicant, poll.listing_deposit, ESCROW)
        poll.outcome = res.outcome
        self._emit("PollResolved", poll=poll_id, outcome=res.outcome,
                   for_weight=res.for_weight, against_weight=res.against_weight)
        for account, amount, role in res.awards:
            self._move(GOV, ESCROW, account, amount)
            self._emit("Payout", poll=poll_id, account=account, amount=amount, role=role)

        listing = self.state.listings[poll.token]
        self._conclude(listing, proposal_passed=res.outcome is Outcome.LISTING_WINS)
        return res

    def _conclude(self, listing: Listing, proposal_passed: bool) -> None:
        add = listing.kind is ProposalKind.ADD
        if add == proposal_passed:
            owner = listing.applicant if add else listing.owner
            self._set_listing(Listing(listing.token, owner, 0, ListingStatus.LISTED,
                                      ProposalKind.ADD, owner=owner))
            self._set_curated(listing.token, CuratedStatus.LISTED)
        else:
            self._set_listing(Listing(listing.token, listing.applicant, 0, ListingStatus.REMOVED,
                                      listing.kind, owner=None))
            self._set_curated(listing.token, CuratedStatus.NOT_LISTED)
