"""Tagged-variant encoding and canonical serialization.

Variants are frozen dataclasses registered under a tag.  They encode as a
single-key object ``{"Tag": {field: value, ...}}`` with fields in declaration
order, so a decoder needs no type hints.  Canonical text is compact JSON:
no whitespace, UTF-8, integers in base 10, byte strings already held as
lowercase hex.
"""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from typing import Any

_REGISTRY: dict[str, type] = {}


def variant(tag: str | None = None):
    """Class decorator: frozen dataclass + registration under ``tag``."""

    def wrap(cls):
        cls = dataclasses.dataclass(frozen=True)(cls)
        name = tag or cls.__name__
        if name in _REGISTRY and _REGISTRY[name] is not cls:
            raise ValueError(f"duplicate variant tag {name!r}")
        cls.TAG = name
        # immutable: snapshots can share instances
        cls.__deepcopy__ = lambda self, memo: self
        _REGISTRY[name] = cls
        return cls

    return wrap


def tag_of(value) -> str:
    return type(value).TAG


def encode(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        raise TypeError("floats are not canonical")
    if dataclasses.is_dataclass(value):
        body = {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
        tag = getattr(type(value), "TAG", None)
        return {tag: body} if tag else body
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(data: Any) -> Any:
    """Inverse of :func:`encode` for variant trees (lists come back as tuples)."""
    if isinstance(data, list):
        return tuple(decode(v) for v in data)
    if isinstance(data, dict):
        if len(data) == 1:
            (key, body), = data.items()
            cls = _REGISTRY.get(key)
            if cls is not None and isinstance(body, dict):
                return cls(**{k: decode(v) for k, v in body.items()})
        return {k: decode(v) for k, v in data.items()}
    return data


def canonical(obj: Any) -> str:
    return json.dumps(encode(obj), separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical(obj).encode("utf-8")
