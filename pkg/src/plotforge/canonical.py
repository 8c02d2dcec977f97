"""Canonical scene serialization.

One deterministic textual form per snapshot: key-ordered JSON with a type tag
per object, NaN encoded as null.  Used for golden tests, snapshot equality,
and as the byte source for render-cache content hashes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import fields, is_dataclass
from enum import Enum


def to_plain(obj):
    """Recursively convert model objects into JSON-compatible plain data."""
    if is_dataclass(obj) and not isinstance(obj, type):
        out = {"_type": type(obj).__name__}
        for f in fields(obj):
            out[f.name] = to_plain(getattr(obj, f.name))
        return out
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, (tuple, list)):
        return [to_plain(v) for v in obj]
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic key-ordered JSON text for any model object."""
    return json.dumps(to_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def content_hash(*parts) -> str:
    """sha256 over the canonical forms of ``parts``; the tile cache key."""
    h = hashlib.sha256()
    for part in parts:
        h.update(canonical_json(part).encode("utf-8"))
        h.update(b"\x1f")
    return h.hexdigest()
