"""Recipient-anonymous broadcast encryption, two ways, with the receipts.

Two interoperating scheme variants — one signing each broadcast with a
throwaway one-time key carried inside the ciphertext, one signing under a
long-term broadcaster identity that recipients verify before decrypting —
plus an instrumented adversary harness that demonstrates exactly where the
first variant leaks work and trust, and that the second one does not.
"""

from . import adversary, improved, original, report, wire
from .broadcast import (
    MAX_MESSAGE,
    BroadcastCiphertext,
    MessageTooLongError,
    RecipientSet,
    Scheme,
)
from .primitives import (
    HEADER_LEN,
    MAX_PLAINTEXT,
    OTS_SIG_LEN,
    OTS_SIGN_KEY_LEN,
    OTS_VERIFY_KEY_LEN,
    PKE_OVERHEAD,
    SYM_OVERHEAD,
    BroadcasterKeyPair,
    CryptoError,
    MalformedComponentError,
    OneTimeKeyPair,
    OneTimeKeyReuseError,
    OpCounters,
    PlaintextTooLongError,
    RecipientKeyPair,
    RejectMode,
    SystemParams,
    UnsupportedSecurityLevelError,
)
from .rng import Rng

__version__ = "0.1.0"

__all__ = [
    "BroadcastCiphertext",
    "BroadcasterKeyPair",
    "CryptoError",
    "HEADER_LEN",
    "MAX_MESSAGE",
    "MAX_PLAINTEXT",
    "MalformedComponentError",
    "MessageTooLongError",
    "OTS_SIGN_KEY_LEN",
    "OTS_SIG_LEN",
    "OTS_VERIFY_KEY_LEN",
    "OneTimeKeyPair",
    "OneTimeKeyReuseError",
    "OpCounters",
    "PKE_OVERHEAD",
    "PlaintextTooLongError",
    "RecipientKeyPair",
    "RecipientSet",
    "RejectMode",
    "Rng",
    "SYM_OVERHEAD",
    "Scheme",
    "SystemParams",
    "UnsupportedSecurityLevelError",
    "adversary",
    "improved",
    "original",
    "report",
    "wire",
]
