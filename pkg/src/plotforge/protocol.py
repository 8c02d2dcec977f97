"""Wire protocol framing and message codecs.

Every message on the socket is:

    4-byte big-endian length N | N bytes of payload

and the payload is one tag byte followed by the body:

    tag 0x00  control: UTF-8 JSON object
    tag 0x01  frame:   4-byte big-endian header length H,
                       H bytes of UTF-8 JSON header, then raw PNG bytes

The framing layer is shared by server and tests; it never inspects JSON
contents beyond requiring an object.
"""

from __future__ import annotations

import json
import struct

TAG_CONTROL = 0x00
TAG_FRAME = 0x01

MAX_MESSAGE = 64 * 1024 * 1024  # refuse absurd lengths instead of allocating


class ProtocolViolation(Exception):
    pass


def encode_control(obj: dict) -> bytes:
    body = json.dumps(obj, separators=(",", ":"), sort_keys=True, allow_nan=False).encode()
    payload = bytes([TAG_CONTROL]) + body
    return struct.pack(">I", len(payload)) + payload


def encode_frame(header: dict, png: bytes) -> bytes:
    head = json.dumps(header, separators=(",", ":"), sort_keys=True, allow_nan=False).encode()
    payload = bytes([TAG_FRAME]) + struct.pack(">I", len(head)) + head + png
    return struct.pack(">I", len(payload)) + payload


def decode_payload(payload: bytes):
    """-> ("control", obj) or ("frame", header_obj, png_bytes)."""
    if not payload:
        raise ProtocolViolation("empty payload")
    tag, body = payload[0], payload[1:]
    if tag == TAG_CONTROL:
        obj = json.loads(body.decode())
        if not isinstance(obj, dict):
            raise ProtocolViolation("control payload must be a JSON object")
        return ("control", obj)
    if tag == TAG_FRAME:
        if len(body) < 4:
            raise ProtocolViolation("truncated frame header length")
        hlen = struct.unpack(">I", body[:4])[0]
        if len(body) < 4 + hlen:
            raise ProtocolViolation("truncated frame header")
        header = json.loads(body[4 : 4 + hlen].decode())
        return ("frame", header, body[4 + hlen :])
    raise ProtocolViolation(f"unknown tag byte 0x{tag:02x}")


class MessageReader:
    """Incremental decoder: feed() bytes, iterate complete messages."""

    def __init__(self) -> None:
        self._buf = bytearray()

    def feed(self, data: bytes) -> list:
        self._buf.extend(data)
        out = []
        while True:
            if len(self._buf) < 4:
                break
            n = struct.unpack(">I", bytes(self._buf[:4]))[0]
            if n > MAX_MESSAGE:
                raise ProtocolViolation(f"message length {n} exceeds limit")
            if len(self._buf) < 4 + n:
                break
            payload = bytes(self._buf[4 : 4 + n])
            del self._buf[: 4 + n]
            out.append(decode_payload(payload))
        return out


def read_message(sock):
    """Blocking read of one complete message from a socket; None at EOF."""
    head = _read_exact(sock, 4)
    if head is None:
        return None
    n = struct.unpack(">I", head)[0]
    if n > MAX_MESSAGE:
        raise ProtocolViolation(f"message length {n} exceeds limit")
    payload = _read_exact(sock, n)
    if payload is None:
        raise ProtocolViolation("connection closed mid-message")
    return decode_payload(payload)


def _read_exact(sock, n: int) -> bytes | None:
    """None on EOF at a message boundary; raises if the stream dies mid-read."""
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            if buf:
                raise ProtocolViolation("connection closed mid-message")
            return None
        buf.extend(chunk)
    return bytes(buf)
