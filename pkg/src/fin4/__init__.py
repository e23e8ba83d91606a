"""Finance 4.0 style cryptoeconomic interaction layer.

Permissionless multi-dimensional token creation, proof-verified claiming,
token-curated-registry governance with REP/GOV, token value backing, and a
seeded agent-based simulation, all over a hash-chained event log.
"""

from . import errors
from .backing import CoupledBurn, ExternalNote, MintConversion, Pool, SwapPool, pool_account, reserve_account
from .claims import (AttachmentHash, Approval, Attestation, Claim, ClaimStatus, ClaimWindow, Comparator,
                     Coordinate, DesignatedApprover, Digest, Endorsement, Location, Measurement, PeerQuorum,
                     SensorOracle, SlotStatus, TokenBalanceThreshold, evaluate_location, haversine_m,
                     sign_coordinate, sign_measurement)
from .engine import Engine, EngineConfig
from .ledger import GOV, REP, EventRecord, derive_account, parse_log, read_log_lines, verify_log
from .reputation import GovDelegation, RepConfig
from .tcr import Choice, ListingStatus, Outcome, ProposalKind, TcrParams, commit_hash, resolve_payouts
from .tokens import (All, Capped, CreationCondition, CuratedStatus, FixedPerClaim, NoPremint, Partial,
                     ProportionalToQuantity, TokenDesign, Uncapped, design_from_data, validate_design)

__version__ = "0.1.0"
