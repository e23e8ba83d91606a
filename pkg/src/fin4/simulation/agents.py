"""Agent behaviours (local agent layer).

Agents only act through public engine commands.  Ground truth about whether
a claimed action really happened lives in the simulation (``sim.truth``), and
approvers and oracles read it the way a real witness or sensor would observe
the world.  Failed commands are dropped: the engine rolls them back and they
leave no trace in the log.
"""

from __future__ import annotations

from fractions import Fraction

from .. import errors, signing
from ..claims import (Approval, Attestation, AttachmentHash, ClaimStatus, Comparator, Digest,
                      DesignatedApprover, Endorsement, Location, PeerQuorum, SensorOracle,
                      SlotStatus, sign_coordinate, sign_measurement)
from ..tcr import Choice, ListingStatus, Outcome, ProposalKind, commit_hash
from ..tokens import All, CuratedStatus
from . import config as cfg

# 1 m of latitude is ~89.93 e7-degrees; 89 keeps the point strictly inside
E7_PER_METRE = 89


class Agent:
    def __init__(self, index: int, account: str, policy, kind_index: int):
        self.index = index
        self.account = account
        self.policy = policy
        self.kind_index = kind_index

    @property
    def kind(self) -> str:
        return type(self.policy).TAG

    def act(self, sim) -> None:
        pass

    def _try(self, sim, fn, *args):
        try:
            return fn(*args)
        except errors.Fin4Error as exc:
            sim.failed_actions[type(exc).__name__] += 1
            return None


class _ClaimingAgent(Agent):
    performed = True

    def _targets(self, sim):
        wanted = self.policy.target_tokens or range(len(sim.config.token_designs))
        out = []
        for d in wanted:
            tid = sim.token_of_design.get(d)
            if tid is not None and not isinstance(
                    sim.engine.state.tokens[tid].design.unconditional_creation, All):
                out.append(tid)
        return out

    def _claim(self, sim, quantity=1):
        targets = self._targets(sim)
        if not targets:
            return None
        token = sim.rng.choice(targets)
        cid = self._try(sim, sim.engine.submit_claim, self.account, token, quantity)
        if cid is not None:
            sim.truth[cid] = (self.account, self.performed)
        return cid

    def _attach(self, sim, cid):
        claim = sim.engine.get_claim(cid)
        verifiers = sim.engine.state.tokens[claim.token].design.verifiers
        for i, spec in enumerate(verifiers):
            if claim.status is not ClaimStatus.OPEN:
                return
            if isinstance(spec, AttachmentHash) and claim.slots[i].status is SlotStatus.PENDING:
                att = Attestation(cid, i, Digest(self.account, sim.rng.hex32()))
                self._try(sim, sim.engine.submit_attestation, att)


class HonestClaimantAgent(_ClaimingAgent):
    def act(self, sim):
        p = self.policy
        if sim.rng.chance(Fraction(p.action_prob)):
            qty = sim.rng.between(1, p.max_quantity)
            cid = self._claim(sim, qty)
            if cid is not None:
                self._attach(sim, cid)


class FreeRiderAgent(_ClaimingAgent):
    performed = False

    def act(self, sim):
        p = self.policy
        if not sim.rng.chance(Fraction(p.claim_prob)):
            return
        cid = self._claim(sim)
        if cid is None or p.bad_proof_strategy == "none":
            return
        self._attach(sim, cid)
        if p.bad_proof_strategy == "forge":
            # sign passing measurements with a key the verifier does not trust
            fake = signing.derive_seed(f"forger:{self.account}")
            claim = sim.engine.get_claim(cid)
            for i, spec in enumerate(sim.engine.state.tokens[claim.token].design.verifiers):
                if isinstance(spec, SensorOracle) and claim.status is ClaimStatus.OPEN:
                    self._try(sim, sim.engine.submit_attestation,
                              sign_measurement(fake, cid, i, spec.threshold))


class CreatorAgent(Agent):
    def __init__(self, *a, designs=()):
        super().__init__(*a)
        self.designs = designs
        self.tokens: list[int] = []

    def act(self, sim):
        e = sim.engine
        if e.now == self.policy.create_tick:
            for d in self.designs:
                tid = self._try(sim, e.create_token, self.account, sim.designs[d])
                if tid is not None:
                    sim.register(d, tid)
                    self.tokens.append(tid)
        if e.claimable_gov(self.account):
            e.claim_gov(self.account)
        for tid in self.tokens:
            sim.housekeep(self, tid)
            if not self.policy.apply_listing:
                continue
            listing = e.get_listing(tid)
            if (e.get_token(tid).curated_status is CuratedStatus.NOT_LISTED
                    and (listing is None or not listing.active)
                    and e.effective_gov(self.account) >= e.tcr_params.min_deposit):
                self._try(sim, e.apply_listing, self.account, tid, ProposalKind.ADD)


class ApproverAgent(Agent):
    """Answers designated-approver and peer-quorum slots naming this account."""

    def act(self, sim):
        e = sim.engine
        honesty = Fraction(self.policy.honesty_prob)
        for cid in list(sim.open_claims()):
            claim = e.get_claim(cid)
            verifiers = e.state.tokens[claim.token].design.verifiers
            for i, spec in enumerate(verifiers):
                if claim.status is not ClaimStatus.OPEN:
                    break
                slot = claim.slots[i]
                if slot.status is not SlotStatus.PENDING:
                    continue
                if isinstance(spec, DesignatedApprover) and spec.approver == self.account:
                    payload = Approval
                elif (isinstance(spec, PeerQuorum) and self.account in spec.attestors
                      and self.account not in slot.endorsers + slot.decliners):
                    payload = Endorsement
                else:
                    continue
                verdict = sim.performed(cid)
                if not sim.rng.chance(honesty):
                    verdict = not verdict
                self._try(sim, e.submit_attestation, Attestation(cid, i, payload(self.account, verdict)))


class OracleAgent(Agent):
    """Signs sensor readings and positions for slots that trust its key."""

    def __init__(self, *a, seed_hex: str):
        super().__init__(*a)
        self.seed_hex = seed_hex
        self.key = signing.public_key(seed_hex)

    def act(self, sim):
        e = sim.engine
        lo, hi = self.policy.measurement_range
        for cid in list(sim.open_claims()):
            claim = e.get_claim(cid)
            verifiers = e.state.tokens[claim.token].design.verifiers
            for i, spec in enumerate(verifiers):
                if claim.status is not ClaimStatus.OPEN:
                    break
                if claim.slots[i].status is not SlotStatus.PENDING:
                    continue
                if getattr(spec, "oracle_key", None) != self.key:
                    continue
                happened = sim.performed(cid)
                if isinstance(spec, SensorOracle):
                    if happened:
                        value = sim.rng.between(lo, hi)
                    else:
                        value = spec.threshold - 1 if spec.comparator is Comparator.GE else spec.threshold + 1
                    att = sign_measurement(self.seed_hex, cid, i, value)
                else:
                    lat, lon = self._position(sim, spec, happened)
                    att = sign_coordinate(self.seed_hex, cid, i, lat, lon)
                self._try(sim, e.submit_attestation, att)

    @staticmethod
    def _position(sim, spec: Location, happened: bool):
        if happened:
            offset = sim.rng.between(0, spec.radius_m // 2) * E7_PER_METRE
            lat = spec.center_lat_e7 + (offset if spec.center_lat_e7 <= 0 else -offset)
            return lat, spec.center_lon_e7
        # antipode of the centre
        lon = spec.center_lon_e7 + (1_800_000_000 if spec.center_lon_e7 <= 0 else -1_800_000_000)
        return -spec.center_lat_e7, lon


class CuratorAgent(Agent):
    def __init__(self, *a):
        super().__init__(*a)
        self.secrets: dict[int, tuple] = {}  # poll id -> (choice, salt)

    def _supports(self, sim, token: int, kind: ProposalKind) -> bool:
        good = sim.is_good(token)
        wants = good if kind is ProposalKind.ADD else not good
        return wants if self.policy.vote_rule == "truthful" else not wants

    def act(self, sim):
        e = sim.engine
        p = self.policy
        params = e.tcr_params
        if e.claimable_gov(self.account):
            e.claim_gov(self.account)
        for tid in range(len(e.state.tokens)):
            sim.housekeep(self, tid)

        if sim.rng.chance(Fraction(p.apply_prob)):
            free = [t.id for t in e.list_tokens()
                    if t.curated_status is CuratedStatus.NOT_LISTED
                    and not (e.get_listing(t.id) and e.get_listing(t.id).active)]
            if p.vote_rule != "abstain":
                free = [t for t in free if self._supports(sim, t, ProposalKind.ADD)]
            if free and e.effective_gov(self.account) >= params.min_deposit:
                self._try(sim, e.apply_listing, self.account, sim.rng.choice(free), ProposalKind.ADD)

        if sim.rng.chance(Fraction(p.challenge_prob)):
            targets = []
            for tid, listing in sorted(e.state.listings.items()):
                open_app = listing.status is ListingStatus.APPLIED and e.now < listing.deadline
                if not (open_app or listing.status is ListingStatus.LISTED):
                    continue
                kind = listing.kind if open_app else ProposalKind.ADD
                if p.vote_rule == "abstain" or not self._supports(sim, tid, kind):
                    targets.append(tid)
            if targets and e.effective_gov(self.account) >= params.min_deposit:
                self._try(sim, e.challenge, self.account, sim.rng.choice(targets))

        if p.vote_rule == "abstain":
            return
        for poll in e.state.polls:
            if poll.outcome is not Outcome.UNRESOLVED:
                continue
            if e.now < poll.commit_deadline and poll.id not in self.secrets:
                stake = min(e.effective_gov(self.account), params.min_deposit)
                if stake < 1:
                    continue
                kind = e.get_listing(poll.token).kind
                choice = Choice.FOR if self._supports(sim, poll.token, kind) else Choice.AGAINST
                salt = sim.rng.hex32()
                done = self._try(sim, e.commit_vote, self.account, poll.id,
                                 commit_hash(choice, salt, poll.id), stake)
                if done is not None or self.account in poll.commits:
                    self.secrets[poll.id] = (choice, salt)
            elif (poll.commit_deadline <= e.now < poll.reveal_deadline
                  and poll.id in self.secrets and self.account not in poll.reveals):
                choice, salt = self.secrets[poll.id]
                self._try(sim, e.reveal_vote, self.account, poll.id, choice, salt)


AGENT_CLASSES = {
    cfg.HonestClaimant: HonestClaimantAgent,
    cfg.FreeRider: FreeRiderAgent,
    cfg.Creator: CreatorAgent,
    cfg.Approver: ApproverAgent,
    cfg.Oracle: OracleAgent,
    cfg.Curator: CuratorAgent,
}
