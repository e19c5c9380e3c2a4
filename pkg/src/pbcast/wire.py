"""Byte-level encoding of ciphertexts and key files.

There is exactly one encoding per value.  Ciphertext envelope::

    "PBE1" | scheme tag (1) | u32 |sig| | sig | u32 count |
    repeat count times: u32 |component| | component | u32 |body| | body

Key file::

    "PBK1" | role tag (1) | params digest (32) | u32 |key| | key

All integers are big-endian.  Parsing consumes the input exactly: length
prefixes are bounds-checked against the remaining data before any slice is
taken, unknown tags and bad magic are rejected, and every error carries the
byte offset at which the input stopped making sense.
"""

from __future__ import annotations

import struct
from enum import Enum
from pathlib import Path

from .broadcast import BroadcastCiphertext, Scheme
from .primitives import OTS_SIG_LEN, SIG_LEN, SystemParams

MAGIC = b"PBE1"
KEY_MAGIC = b"PBK1"

_KEY_LEN = 32
_SIG_LEN_BY_SCHEME = {Scheme.ORIGINAL: OTS_SIG_LEN, Scheme.IMPROVED: SIG_LEN}


class WireError(Exception):
    """Malformed serialized data; ``offset`` is where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class BadMagicError(WireError):
    pass


class UnknownTagError(WireError):
    pass


class TruncatedError(WireError):
    pass


class TrailingDataError(WireError):
    pass


class InvalidFieldError(WireError):
    pass


class KeyRole(Enum):
    """What a key file holds.  Secret roles never appear on stdout."""

    RECIPIENT_PUBLIC = 0x01
    RECIPIENT_SECRET = 0x02
    BROADCASTER_PUBLIC = 0x03
    BROADCASTER_SECRET = 0x04

    @property
    def is_secret(self) -> bool:
        return self in (KeyRole.RECIPIENT_SECRET, KeyRole.BROADCASTER_SECRET)

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


class _Reader:
    """Cursor over immutable bytes with offset-carrying failures."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(
                f"need {n} bytes for {what}, input ends after "
                f"{len(self.data) - self.pos} more", len(self.data)
            )
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u32(self, what: str) -> int:
        return struct.unpack(">I", self.take(4, what))[0]

    def lp_bytes(self, what: str) -> bytes:
        n = self.u32(f"length of {what}")
        return self.take(n, what)

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise TrailingDataError(
                f"{len(self.data) - self.pos} unexpected trailing bytes", self.pos
            )


def _lp(data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + data


# ---------------------------------------------------------------------------
# Ciphertext envelope.

def serialize_ciphertext(ciphertext: BroadcastCiphertext) -> bytes:
    parts = [
        MAGIC,
        bytes([ciphertext.scheme.value]),
        _lp(ciphertext.signature),
        struct.pack(">I", len(ciphertext.components)),
    ]
    parts.extend(_lp(c) for c in ciphertext.components)
    parts.append(_lp(ciphertext.message_ct))
    return b"".join(parts)


def parse_ciphertext(data: bytes) -> BroadcastCiphertext:
    """Strictly parse one ciphertext envelope.

    Raises:
        BadMagicError, UnknownTagError, TruncatedError, TrailingDataError,
        InvalidFieldError: see each message for the offending offset.
    """
    r = _Reader(data)
    if r.take(4, "magic") != MAGIC:
        raise BadMagicError("not a ciphertext envelope", 0)
    tag_offset = r.pos
    tag = r.u8("scheme tag")
    try:
        scheme = Scheme.from_tag(tag)
    except ValueError:
        raise UnknownTagError(f"unknown scheme tag {tag:#04x}", tag_offset) from None
    sig_offset = r.pos
    signature = r.lp_bytes("signature")
    if len(signature) != _SIG_LEN_BY_SCHEME[scheme]:
        raise InvalidFieldError(
            f"{scheme.label} signature must be {_SIG_LEN_BY_SCHEME[scheme]} bytes, "
            f"got {len(signature)}", sig_offset,
        )
    count_offset = r.pos
    count = r.u32("component count")
    if count == 0:
        raise InvalidFieldError("component count is zero", count_offset)
    components = []
    for i in range(count):
        comp_offset = r.pos
        component = r.lp_bytes(f"component {i}")
        if components and len(component) != len(components[0]):
            raise InvalidFieldError(
                f"component {i} is {len(component)} bytes but component 0 "
                f"is {len(components[0])}", comp_offset,
            )
        components.append(component)
    message_ct = r.lp_bytes("message body")
    r.finish()
    return BroadcastCiphertext(
        scheme=scheme,
        signature=signature,
        components=tuple(components),
        message_ct=message_ct,
    )


# ---------------------------------------------------------------------------
# Key files.

def serialize_key(role: KeyRole, params: SystemParams, key: bytes) -> bytes:
    if len(key) != _KEY_LEN:
        raise ValueError(f"{role.label} key must be {_KEY_LEN} bytes")
    return KEY_MAGIC + bytes([role.value]) + params.digest() + _lp(key)


def parse_key(
    data: bytes,
    expected_role: KeyRole | None = None,
    params: SystemParams | None = None,
) -> tuple[KeyRole, bytes]:
    """Parse a key file, optionally pinning its role and parameter set."""
    r = _Reader(data)
    if r.take(4, "magic") != KEY_MAGIC:
        raise BadMagicError("not a key file", 0)
    role_offset = r.pos
    tag = r.u8("role tag")
    try:
        role = KeyRole(tag)
    except ValueError:
        raise UnknownTagError(f"unknown key role {tag:#04x}", role_offset) from None
    digest_offset = r.pos
    digest = r.take(32, "params digest")
    key_offset = r.pos
    key = r.lp_bytes("key")
    r.finish()
    if len(key) != _KEY_LEN:
        raise InvalidFieldError(
            f"key must be {_KEY_LEN} bytes, got {len(key)}", key_offset
        )
    if expected_role is not None and role is not expected_role:
        raise InvalidFieldError(
            f"expected a {expected_role.label} key file, found {role.label}",
            role_offset,
        )
    if params is not None and digest != params.digest():
        raise InvalidFieldError(
            "key file was produced under different system parameters",
            digest_offset,
        )
    return role, key


def write_key_file(
    path: str | Path, role: KeyRole, params: SystemParams, key: bytes
) -> None:
    Path(path).write_bytes(serialize_key(role, params, key))


def read_key_file(
    path: str | Path,
    expected_role: KeyRole | None = None,
    params: SystemParams | None = None,
) -> tuple[KeyRole, bytes]:
    return parse_key(Path(path).read_bytes(), expected_role=expected_role, params=params)
