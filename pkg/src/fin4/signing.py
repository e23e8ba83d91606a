"""Ed25519 helpers for oracle attestations (keys and signatures as hex)."""

from __future__ import annotations

import hashlib

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey

_RAW = dict(encoding=serialization.Encoding.Raw, format=serialization.PublicFormat.Raw)


def derive_seed(label: str) -> str:
    """32-byte private seed (hex) derived from a label; for simulated oracles."""
    return hashlib.sha256(label.encode("utf-8")).hexdigest()


def public_key(seed_hex: str) -> str:
    key = Ed25519PrivateKey.from_private_bytes(bytes.fromhex(seed_hex))
    return key.public_key().public_bytes(**_RAW).hex()


def sign(seed_hex: str, message: bytes) -> str:
    key = Ed25519PrivateKey.from_private_bytes(bytes.fromhex(seed_hex))
    return key.sign(message).hex()


def verify(public_hex: str, message: bytes, signature_hex: str) -> bool:
    try:
        pub = Ed25519PublicKey.from_public_bytes(bytes.fromhex(public_hex))
        sig = bytes.fromhex(signature_hex)
        if len(sig) != 64:
            return False
        pub.verify(sig, message)
    except (InvalidSignature, ValueError, TypeError):
        return False
    return True
