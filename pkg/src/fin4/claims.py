"""Token obtainer: claims, action verifiers and attestations.

A token's verifiers form a conjunction.  Each claim has one proof slot per
verifier; the claim is approved (and minted) once every slot is approved and
rejected as soon as one slot is rejected.  ``ClaimWindow`` and
``TokenBalanceThreshold`` are decided at submission; every other verifier
waits for an attestation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from . import errors, signing
from .codec import canonical_bytes, variant
from .ledger import check_account, command, is_account
from .tokens import All, CreationCondition, FixedPerClaim

EARTH_RADIUS_M = 6371000


class Comparator(str, Enum):
    GE = ">="
    LE = "<="


class SlotStatus(str, Enum):
    PENDING = "Pending"
    APPROVED = "Approved"
    REJECTED = "Rejected"


class ClaimStatus(str, Enum):
    OPEN = "Open"
    APPROVED = "Approved"
    REJECTED = "Rejected"


def _uint(x) -> bool:
    return type(x) is int and x >= 0


def _sint(x) -> bool:
    return type(x) is int


# -- verifier specs ------------------------------------------------------------


class _Verifier:
    ROLE = "verifier"
    AUTO = False

    def violations(self) -> list[str]:
        return []


@variant()
class DesignatedApprover(_Verifier):
    approver: str

    def violations(self):
        return [] if is_account(self.approver) else ["InvalidVerifier"]


@variant()
class PeerQuorum(_Verifier):
    attestors: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "attestors", tuple(self.attestors))

    def violations(self):
        ok = (all(is_account(a) for a in self.attestors)
              and len(set(self.attestors)) == len(self.attestors)
              and type(self.k) is int and 1 <= self.k <= len(self.attestors))
        return [] if ok else ["InvalidVerifier"]


@variant()
class SensorOracle(_Verifier):
    oracle_key: str
    comparator: Comparator
    threshold: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "comparator", Comparator(self.comparator))
        except ValueError:
            pass

    def violations(self):
        ok = (is_account(self.oracle_key) and isinstance(self.comparator, Comparator)
              and _sint(self.threshold))
        return [] if ok else ["InvalidVerifier"]

    def accepts(self, value: int) -> bool:
        if self.comparator is Comparator.GE:
            return value >= self.threshold
        return value <= self.threshold


@variant()
class Location(_Verifier):
    center_lat_e7: int
    center_lon_e7: int
    radius_m: int
    oracle_key: str

    def violations(self):
        ok = (_sint(self.center_lat_e7) and abs(self.center_lat_e7) <= 900_000_000
              and _sint(self.center_lon_e7) and abs(self.center_lon_e7) <= 1_800_000_000
              and type(self.radius_m) is int and self.radius_m >= 1
              and is_account(self.oracle_key))
        return [] if ok else ["InvalidVerifier"]


@variant()
class TokenBalanceThreshold(_Verifier):
    token: int | str
    min_balance: int
    AUTO = True

    def violations(self):
        return [] if _uint(self.min_balance) else ["InvalidVerifier"]


@variant()
class ClaimWindow(_Verifier):
    max_claims: int
    per_ticks: int
    AUTO = True

    def violations(self):
        ok = _uint(self.max_claims) and type(self.per_ticks) is int and self.per_ticks >= 1
        return [] if ok else ["InvalidVerifier"]


@variant()
class AttachmentHash(_Verifier):
    pass


# -- attestation payloads ------------------------------------------------------


@variant()
class Approval:
    approver: str
    approve: bool = True


@variant()
class Endorsement:
    attestor: str
    endorse: bool = True


@variant()
class Measurement:
    value: int
    signature: str


@variant()
class Coordinate:
    lat_e7: int
    lon_e7: int
    signature: str


@variant()
class Digest:
    claimant: str
    digest: str


@variant()
class Attestation:
    claim: int
    verifier_index: int
    payload: Approval | Endorsement | Measurement | Coordinate | Digest


_PAYLOAD_FOR = {
    DesignatedApprover: Approval,
    PeerQuorum: Endorsement,
    SensorOracle: Measurement,
    Location: Coordinate,
    AttachmentHash: Digest,
}


def measurement_message(claim: int, verifier_index: int, value: int) -> bytes:
    return canonical_bytes({"claim": claim, "verifier_index": verifier_index, "value": value})


def coordinate_message(claim: int, verifier_index: int, lat_e7: int, lon_e7: int) -> bytes:
    return canonical_bytes({"claim": claim, "verifier_index": verifier_index,
                            "lat_e7": lat_e7, "lon_e7": lon_e7})


def sign_measurement(seed_hex: str, claim: int, verifier_index: int, value: int) -> Attestation:
    sig = signing.sign(seed_hex, measurement_message(claim, verifier_index, value))
    return Attestation(claim, verifier_index, Measurement(value, sig))


def sign_coordinate(seed_hex: str, claim: int, verifier_index: int,
                    lat_e7: int, lon_e7: int) -> Attestation:
    sig = signing.sign(seed_hex, coordinate_message(claim, verifier_index, lat_e7, lon_e7))
    return Attestation(claim, verifier_index, Coordinate(lat_e7, lon_e7, sig))


def haversine_m(lat1_e7: int, lon1_e7: int, lat2_e7: int, lon2_e7: int) -> float:
    """Great-circle distance in metres between two e7-scaled degree positions."""
    phi1 = math.radians(lat1_e7 / 1e7)
    phi2 = math.radians(lat2_e7 / 1e7)
    dphi = phi2 - phi1
    dlmb = math.radians((lon2_e7 - lon1_e7) / 1e7)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def evaluate_location(spec: Location, coord: Coordinate, claim: int, verifier_index: int) -> bool:
    """True if the oracle-signed point lies within ``spec.radius_m`` of the centre."""
    msg = coordinate_message(claim, verifier_index, coord.lat_e7, coord.lon_e7)
    if not signing.verify(spec.oracle_key, msg, coord.signature):
        raise errors.BadOracleSignature(f"claim {claim} slot {verifier_index}")
    d = haversine_m(spec.center_lat_e7, spec.center_lon_e7, coord.lat_e7, coord.lon_e7)
    return d <= spec.radius_m


# -- claim state ---------------------------------------------------------------


@dataclass
class Slot:
    status: SlotStatus = SlotStatus.PENDING
    reason: str = ""
    endorsers: list = field(default_factory=list)
    decliners: list = field(default_factory=list)


@dataclass
class Claim:
    id: int
    claimant: str
    token: int
    quantity: int
    submitted_at: int
    slots: list
    status: ClaimStatus = ClaimStatus.OPEN
    minted: int = 0
    mint_error: str | None = None


class ClaimOps:
    """Claim lifecycle.  Mixed into ``Engine``."""

    def get_claim(self, claim_id: int) -> Claim:
        if type(claim_id) is not int or not 0 <= claim_id < len(self.state.claims):
            raise errors.UnknownClaim(f"unknown claim {claim_id!r}")
        return self.state.claims[claim_id]

    def list_claims(self) -> list[Claim]:
        return list(self.state.claims)

    @command("SubmitClaim")
    def submit_claim(self, claimant: str, token: int, quantity: int = 1) -> int:
        check_account(claimant)
        design = self.get_token(token).design
        if (design.creation_condition is not CreationCondition.ACTION
                or isinstance(design.unconditional_creation, All)):
            raise errors.TokenNotClaimable(f"token {token} is fully pre-minted")
        if type(quantity) is not int or quantity < 1:
            raise errors.InvalidQuantity(f"quantity must be >= 1, got {quantity!r}")
        if isinstance(design.minting_policy, FixedPerClaim):
            quantity = 1

        now = self.state.tick
        claim = Claim(len(self.state.claims), claimant, token, quantity, now,
                      [Slot() for _ in design.verifiers])
        prior = [c for c in self.state.claims if c.claimant == claimant and c.token == token]
        self.state.claims.append(claim)
        self._emit("ClaimOpened", claim=claim.id, claimant=claimant, token=token,
                   quantity=quantity)

        for i, spec in enumerate(design.verifiers):
            if isinstance(spec, ClaimWindow):
                recent = sum(1 for c in prior if now - c.submitted_at < spec.per_ticks)
                if recent >= spec.max_claims:
                    self._decide(claim, i, False, "claim window exhausted")
                else:
                    self._decide(claim, i, True)
            elif isinstance(spec, TokenBalanceThreshold):
                bal = self.balance_of(spec.token, claimant)
                if bal >= spec.min_balance:
                    self._decide(claim, i, True)
                else:
                    self._decide(claim, i, False, "balance below threshold")
        self._settle(claim)
        return claim.id

    @command("SubmitAttestation")
    def submit_attestation(self, attestation: Attestation) -> SlotStatus:
        att = attestation
        if not isinstance(att, Attestation):
            raise errors.PayloadMismatch("not an attestation")
        claim = self.get_claim(att.claim)
        if claim.status is not ClaimStatus.OPEN:
            raise errors.ClaimClosed(f"claim {claim.id} is {claim.status.value}")
        verifiers = self.state.tokens[claim.token].design.verifiers
        idx = att.verifier_index
        if type(idx) is not int or not 0 <= idx < len(verifiers):
            raise errors.IndexOutOfRange(f"verifier index {idx!r}")
        spec = verifiers[idx]
        expected = _PAYLOAD_FOR.get(type(spec))
        if expected is None or not isinstance(att.payload, expected):
            raise errors.PayloadMismatch(
                f"{spec.TAG} slot does not take {type(att.payload).__name__}")
        slot = claim.slots[idx]
        if slot.status is not SlotStatus.PENDING:
            raise errors.DuplicateAttestation(f"claim {claim.id} slot {idx} already decided")
        p = att.payload

        if isinstance(spec, DesignatedApprover):
            if p.approver != spec.approver:
                raise errors.UnauthorizedAttestor("not the designated approver")
            self._decide(claim, idx, bool(p.approve), "" if p.approve else "declined by approver")

        elif isinstance(spec, PeerQuorum):
            if p.attestor not in spec.attestors:
                raise errors.UnauthorizedAttestor("not in the attestor list")
            if p.attestor in slot.endorsers or p.attestor in slot.decliners:
                raise errors.DuplicateAttestation("attestor already voted on this slot")
            (slot.endorsers if p.endorse else slot.decliners).append(p.attestor)
            self._emit("Endorsed", claim=claim.id, index=idx, attestor=p.attestor,
                       endorse=bool(p.endorse))
            if len(slot.endorsers) >= spec.k:
                self._decide(claim, idx, True)
            elif len(spec.attestors) - len(slot.decliners) < spec.k:
                self._decide(claim, idx, False, "quorum unreachable")

        elif isinstance(spec, SensorOracle):
            if not _sint(p.value):
                raise errors.PayloadMismatch("measurement must be an integer")
            msg = measurement_message(claim.id, idx, p.value)
            if not signing.verify(spec.oracle_key, msg, p.signature):
                raise errors.BadOracleSignature(f"claim {claim.id} slot {idx}")
            ok = spec.accepts(p.value)
            self._decide(claim, idx, ok, "" if ok else f"measurement {p.value} fails {spec.comparator.value} {spec.threshold}")

        elif isinstance(spec, Location):
            if not (_sint(p.lat_e7) and _sint(p.lon_e7)):
                raise errors.PayloadMismatch("coordinates must be integers")
            inside = evaluate_location(spec, p, claim.id, idx)
            self._decide(claim, idx, inside, "" if inside else "outside radius")

        elif isinstance(spec, AttachmentHash):
            if p.claimant != claim.claimant:
                raise errors.UnauthorizedAttestor("only the claimant supplies the attachment")
            if not is_account(p.digest):
                raise errors.PayloadMismatch("digest must be 32 bytes of lowercase hex")
            self._decide(claim, idx, True)

        self._settle(claim)
        return slot.status

    @command("FinalizeClaim")
    def finalize_claim(self, claim_id: int) -> int:
        claim = self.get_claim(claim_id)
        if claim.status is not ClaimStatus.OPEN:
            raise errors.ClaimClosed(f"claim {claim.id} is {claim.status.value}")
        if any(s.status is not SlotStatus.APPROVED for s in claim.slots):
            raise errors.NotAllApproved(f"claim {claim.id} has undecided or rejected slots")
        return self._finalize(claim)

    # -- internals ---------------------------------------------------------------

    def _decide(self, claim: Claim, idx: int, approved: bool, reason: str = "") -> None:
        slot = claim.slots[idx]
        slot.status = SlotStatus.APPROVED if approved else SlotStatus.REJECTED
        slot.reason = reason
        self._emit("SlotDecided", claim=claim.id, index=idx, status=slot.status, reason=reason)

    def _settle(self, claim: Claim) -> None:
        statuses = [s.status for s in claim.slots]
        if SlotStatus.REJECTED in statuses:
            claim.status = ClaimStatus.REJECTED
            self._emit("ClaimClosed", claim=claim.id, status=claim.status, minted=0)
        elif all(s is SlotStatus.APPROVED for s in statuses):
            try:
                self._finalize(claim)
            except (errors.SupplyCapExceeded, errors.BalanceOverflow) as exc:
                # proofs stay valid; the claim waits for a later finalize_claim
                claim.mint_error = type(exc).__name__
                self._emit("MintFailed", claim=claim.id, error=claim.mint_error)

    def _finalize(self, claim: Claim) -> int:
        design = self.state.tokens[claim.token].design
        amount = design.minting_policy.amount(claim.quantity)
        self._mint(claim.token, claim.claimant, amount)
        claim.status = ClaimStatus.APPROVED
        claim.minted = amount
        claim.mint_error = None
        self._emit("ClaimClosed", claim=claim.id, status=claim.status, minted=amount)
        self._award_rep(claim.claimant, "ClaimApproved")
        return amount
