"""Minimal PNG writer.

Output must be byte-identical for identical rasters, so everything variable
is pinned: filter 0 on every scanline, zlib level 6, RGBA8 color type 6,
and no ancillary chunks (in particular no timestamps).
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def encode_png(rgba: np.ndarray) -> bytes:
    if rgba.ndim != 3 or rgba.shape[2] != 4 or rgba.dtype != np.uint8:
        raise ValueError("expected an RGBA8 array of shape (h, w, 4)")
    h, w = rgba.shape[:2]
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 6, 0, 0, 0)
    raw = bytearray()
    for row in rgba:
        raw.append(0)
        raw.extend(row.tobytes())
    idat = zlib.compress(bytes(raw), 6)
    return _SIGNATURE + _chunk(b"IHDR", ihdr) + _chunk(b"IDAT", idat) + _chunk(b"IEND", b"")
