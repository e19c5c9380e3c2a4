"""Shared types for the two broadcast scheme variants.

A broadcast ciphertext is a signature, an ordered tuple of equal-length
per-recipient components, and one symmetric message body.  Nothing in it
names a recipient: components are shuffled at encryption time and are
indistinguishable random-looking strings of identical length.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .primitives import RECIPIENT_PK_LEN, CryptoError

#: Largest broadcast message accepted by either scheme.  Empty is allowed.
MAX_MESSAGE = 1 << 20


class MessageTooLongError(CryptoError):
    """Broadcast message exceeds :data:`MAX_MESSAGE`."""


class Scheme(Enum):
    """Which variant produced a ciphertext; doubles as the wire tag."""

    ORIGINAL = 0x01
    IMPROVED = 0x02

    @classmethod
    def from_tag(cls, tag: int) -> "Scheme":
        for member in cls:
            if member.value == tag:
                return member
        raise ValueError(f"unknown scheme tag: {tag:#04x}")

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class RecipientSet:
    """Validated, ordered set of recipient public keys.

    Order is irrelevant to recipients (components are shuffled) but kept
    stable here so seeded runs are reproducible.
    """

    public_keys: tuple[bytes, ...]

    def __post_init__(self):
        if not self.public_keys:
            raise ValueError("recipient set must not be empty")
        for pk in self.public_keys:
            if len(pk) != RECIPIENT_PK_LEN:
                raise ValueError(
                    f"recipient public key must be {RECIPIENT_PK_LEN} bytes, got {len(pk)}"
                )
        if len(set(self.public_keys)) != len(self.public_keys):
            raise ValueError("duplicate public key in recipient set")

    def __len__(self) -> int:
        return len(self.public_keys)

    def __iter__(self):
        return iter(self.public_keys)


@dataclass(frozen=True)
class BroadcastCiphertext:
    """One broadcast: ``signature`` over the components and message body."""

    scheme: Scheme
    signature: bytes
    components: tuple[bytes, ...]
    message_ct: bytes

    def __post_init__(self):
        if not self.components:
            raise ValueError("ciphertext must carry at least one component")
        first = len(self.components[0])
        if any(len(c) != first for c in self.components):
            raise ValueError("components must all have the same length")

    @property
    def signed_bytes(self) -> bytes:
        """Exactly the bytes the signature covers, in component order."""
        return b"".join(self.components) + self.message_ct

    def __len__(self) -> int:
        return len(self.components)
