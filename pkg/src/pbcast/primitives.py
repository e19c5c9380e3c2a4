"""Cryptographic building blocks shared by both broadcast scheme variants.

Four families of operations live here, each behind a small functional
interface so the scheme modules never touch a backend object directly:

* ``pke_*``   — key-private hybrid public-key encryption (X25519 ECDH,
  HKDF-SHA256, AES-256-CTR, HMAC-SHA256 encrypt-then-MAC).  Components
  carry no recipient identifier and their length depends only on the
  plaintext length.
* ``ots_*``   — a Lamport one-time signature over SHA-256.  Hand-rolled on
  purpose: the scheme logic needs the exact classic key/signature shapes
  and a hard failure on key reuse.
* ``sig_*``   — a reusable, strongly unforgeable signature (Ed25519) for
  broadcasters with a long-term identity.
* ``sym_*``   — authenticated symmetric encryption (AES-256-GCM) for the
  message body.

Every operation takes an optional :class:`OpCounters` and bumps exactly one
counter per call, which is what the adversary harness measures.

Decryption honours a :class:`RejectMode`:

* ``STRICT`` authenticates before releasing anything and returns ``None``
  on any failure.
* ``PERMISSIVE`` models a decryptor with no failure signal: it always
  returns bytes, which under the wrong key are unpredictable garbage of
  the correct length.
"""

from __future__ import annotations

import hashlib
import hmac as _hmac
from dataclasses import dataclass, fields, replace
from enum import Enum

from cryptography.exceptions import InvalidSignature, InvalidTag
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.asymmetric.x25519 import (
    X25519PrivateKey,
    X25519PublicKey,
)
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from .rng import SYSTEM_RNG, Rng

# ---------------------------------------------------------------------------
# Sizes.  All lengths in bytes unless suffixed otherwise.

HASH_LEN = 32
OTS_MESSAGE_BITS = 256
#: Lamport secret key: two preimages per message bit.
OTS_SIGN_KEY_LEN = 2 * OTS_MESSAGE_BITS * HASH_LEN  # 16384
#: Lamport verify key: hash of each preimage, same layout.
OTS_VERIFY_KEY_LEN = OTS_SIGN_KEY_LEN  # 16384
#: Lamport signature: one revealed preimage per message bit.
OTS_SIG_LEN = OTS_MESSAGE_BITS * HASH_LEN  # 8192

#: Length of an encoded broadcaster verify key, used as the component header
#: in the broadcaster-signed scheme.
HEADER_LEN = 32
SIG_LEN = 64

RECIPIENT_PK_LEN = 32
RECIPIENT_SK_LEN = 32

SYM_KEY_LEN = 32
_SYM_NONCE_LEN = 12
_SYM_TAG_LEN = 16
#: sym_enc output length minus plaintext length (nonce plus tag).
SYM_OVERHEAD = _SYM_NONCE_LEN + _SYM_TAG_LEN  # 28

_PKE_EPK_LEN = 32
_PKE_NONCE_LEN = 16
_PKE_MAC_LEN = 32
#: pke_enc component length minus plaintext length.
PKE_OVERHEAD = _PKE_EPK_LEN + _PKE_NONCE_LEN + _PKE_MAC_LEN  # 80

#: Largest plaintext a single component may carry.
MAX_PLAINTEXT = 65536

SUPPORTED_SECURITY_LEVELS = (128, 192, 256)

_PKE_HKDF_INFO = b"pbcast/pke/v1"
_PKE_FALLBACK_DOMAIN = b"pbcast/pke/fallback/v1"


# ---------------------------------------------------------------------------
# Errors.

class CryptoError(Exception):
    """Base class for all data-dependent cryptographic failures."""


class UnsupportedSecurityLevelError(CryptoError):
    """Requested security level has no registered parameter set."""


class PlaintextTooLongError(CryptoError):
    """Plaintext exceeds the per-component limit."""


class MalformedComponentError(CryptoError):
    """Component too short to contain the fixed framing fields.

    Distinct from an authentication failure: this is raised (never
    swallowed into ``None``) in both reject modes, because no decryption
    was attempted at all.
    """


class OneTimeKeyReuseError(CryptoError):
    """A one-time signing key was asked to sign a second message."""


class RejectMode(Enum):
    """How decryption reports failure."""

    STRICT = "strict"
    PERMISSIVE = "permissive"


# ---------------------------------------------------------------------------
# Instrumentation.

@dataclass
class OpCounters:
    """Tally of primitive invocations, bumped once per call.

    Threading a single instance through key generation, encryption, and
    decryption yields the cost profile of that flow; the adversary harness
    aggregates these per trial.
    """

    pke_enc_count: int = 0
    pke_dec_count: int = 0
    ots_gen_count: int = 0
    ots_sign_count: int = 0
    ots_verify_count: int = 0
    sig_sign_count: int = 0
    sig_verify_count: int = 0
    sym_enc_count: int = 0
    sym_dec_count: int = 0
    #: Components whose header matched the trusted broadcaster key during
    #: header-filtered decryption.
    header_match_count: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> "OpCounters":
        """Independent copy of the current tallies."""
        return replace(self)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# ---------------------------------------------------------------------------
# System parameters.

_GROUP_CURVE25519 = 0x01
_HASH_SHA256 = 0x01


@dataclass(frozen=True)
class SystemParams:
    """Public parameters fixing the group and hash for one deployment.

    All supported levels currently share one cipher suite; the level is
    retained so key files can refuse keys from a differently configured
    installation.
    """

    security_level: int
    group_id: int = _GROUP_CURVE25519
    hash_id: int = _HASH_SHA256

    def __post_init__(self):
        if self.security_level not in SUPPORTED_SECURITY_LEVELS:
            raise UnsupportedSecurityLevelError(
                f"unsupported security level: {self.security_level}"
            )

    def to_bytes(self) -> bytes:
        return (
            self.security_level.to_bytes(2, "big")
            + bytes([self.group_id, self.hash_id])
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "SystemParams":
        if len(data) != 4:
            raise ValueError("params encoding must be 4 bytes")
        level = int.from_bytes(data[:2], "big")
        return cls(security_level=level, group_id=data[2], hash_id=data[3])

    def digest(self) -> bytes:
        """Binding digest of the canonical encoding, embedded in key files."""
        return hashlib.sha256(b"pbcast/params/v1" + self.to_bytes()).digest()


def pke_init(security_level: int = 128) -> SystemParams:
    """Validate a security level and return the matching parameter set."""
    return SystemParams(security_level=security_level)


# ---------------------------------------------------------------------------
# Key containers.

@dataclass(frozen=True)
class RecipientKeyPair:
    """X25519 keypair for one broadcast recipient."""

    public_key: bytes
    secret_key: bytes


@dataclass(frozen=True)
class BroadcasterKeyPair:
    """Long-term Ed25519 identity keypair for a broadcaster."""

    public_key: bytes
    secret_key: bytes


@dataclass
class OneTimeKeyPair:
    """Lamport keypair; ``used`` flips after the single permitted signature."""

    verify_key: bytes
    sign_key: bytes
    used: bool = False


# ---------------------------------------------------------------------------
# Key-private public-key encryption.

def pke_gen(params: SystemParams, rng: Rng | None = None) -> RecipientKeyPair:
    """Generate a recipient keypair under ``params``."""
    rng = rng or SYSTEM_RNG
    sk = rng.bytes(RECIPIENT_SK_LEN)
    pk = X25519PrivateKey.from_private_bytes(sk).public_key().public_bytes_raw()
    return RecipientKeyPair(public_key=pk, secret_key=sk)


def _pke_derive(ikm: bytes, epk: bytes) -> tuple[bytes, bytes]:
    okm = HKDF(
        algorithm=hashes.SHA256(),
        length=64,
        salt=None,
        info=_PKE_HKDF_INFO + epk,
    ).derive(ikm)
    return okm[:32], okm[32:]


def _ctr_transform(key: bytes, nonce16: bytes, data: bytes) -> bytes:
    cipher = Cipher(algorithms.AES(key), modes.CTR(nonce16))
    enc = cipher.encryptor()
    return enc.update(data) + enc.finalize()


def pke_enc(
    public_key: bytes,
    plaintext: bytes,
    rng: Rng | None = None,
    counters: OpCounters | None = None,
) -> bytes:
    """Encrypt ``plaintext`` to one recipient public key.

    The component is ``ephemeral_pk || nonce || body || mac`` with nothing
    identifying the recipient; its length is ``len(plaintext) + 80``
    regardless of which key was used.
    """
    if counters is not None:
        counters.pke_enc_count += 1
    if len(public_key) != RECIPIENT_PK_LEN:
        raise ValueError("recipient public key must be 32 bytes")
    if len(plaintext) > MAX_PLAINTEXT:
        raise PlaintextTooLongError(
            f"plaintext is {len(plaintext)} bytes; limit is {MAX_PLAINTEXT}"
        )
    rng = rng or SYSTEM_RNG
    esk = X25519PrivateKey.from_private_bytes(rng.bytes(32))
    epk = esk.public_key().public_bytes_raw()
    shared = esk.exchange(X25519PublicKey.from_public_bytes(public_key))
    enc_key, mac_key = _pke_derive(shared, epk)
    nonce = rng.bytes(_PKE_NONCE_LEN)
    body = _ctr_transform(enc_key, nonce, plaintext)
    mac = _hmac.new(mac_key, epk + nonce + body, hashlib.sha256).digest()
    return epk + nonce + body + mac


def pke_dec(
    secret_key: bytes,
    component: bytes,
    mode: RejectMode = RejectMode.STRICT,
    counters: OpCounters | None = None,
) -> bytes | None:
    """Decrypt one component.

    Args:
        secret_key: the recipient's 32-byte secret scalar.
        component: output of :func:`pke_enc`, possibly for someone else.
        mode: ``STRICT`` verifies the tag and returns ``None`` on failure;
            ``PERMISSIVE`` skips authentication and always returns bytes
            (garbage under the wrong key).
        counters: bumped by one ``pke_dec`` regardless of outcome.

    Raises:
        MalformedComponentError: component shorter than the fixed framing,
            in either mode.
    """
    if counters is not None:
        counters.pke_dec_count += 1
    if len(secret_key) != RECIPIENT_SK_LEN:
        raise ValueError("recipient secret key must be 32 bytes")
    if len(component) < PKE_OVERHEAD:
        raise MalformedComponentError(
            f"component is {len(component)} bytes; minimum is {PKE_OVERHEAD}"
        )
    epk = component[:_PKE_EPK_LEN]
    nonce = component[_PKE_EPK_LEN:_PKE_EPK_LEN + _PKE_NONCE_LEN]
    body = component[_PKE_EPK_LEN + _PKE_NONCE_LEN:-_PKE_MAC_LEN]
    mac = component[-_PKE_MAC_LEN:]
    try:
        shared = X25519PrivateKey.from_private_bytes(secret_key).exchange(
            X25519PublicKey.from_public_bytes(epk)
        )
    except ValueError:
        # Rejected point.  Strict mode has authentication to fail; the
        # permissive decryptor must still hand back bytes.
        if mode is RejectMode.STRICT:
            return None
        shared = hashlib.sha256(_PKE_FALLBACK_DOMAIN + component).digest()
    enc_key, mac_key = _pke_derive(shared, epk)
    if mode is RejectMode.STRICT:
        expected = _hmac.new(mac_key, epk + nonce + body, hashlib.sha256).digest()
        if not _hmac.compare_digest(mac, expected):
            return None
    return _ctr_transform(enc_key, nonce, body)


# ---------------------------------------------------------------------------
# Lamport one-time signatures.

def _ots_bit(digest: bytes, i: int) -> int:
    # Big-endian within each byte: bit 0 is the MSB of digest[0].
    return (digest[i >> 3] >> (7 - (i & 7))) & 1


def ots_gen(
    params: SystemParams | None = None,
    rng: Rng | None = None,
    counters: OpCounters | None = None,
) -> OneTimeKeyPair:
    """Generate a fresh Lamport keypair (one per encryption)."""
    if counters is not None:
        counters.ots_gen_count += 1
    if params is not None and params.hash_id != _HASH_SHA256:
        raise UnsupportedSecurityLevelError(f"unknown hash id: {params.hash_id}")
    rng = rng or SYSTEM_RNG
    sign_key = rng.bytes(OTS_SIGN_KEY_LEN)
    verify_key = b"".join(
        hashlib.sha256(sign_key[off:off + HASH_LEN]).digest()
        for off in range(0, OTS_SIGN_KEY_LEN, HASH_LEN)
    )
    return OneTimeKeyPair(verify_key=verify_key, sign_key=sign_key)


def ots_sign(
    keypair: OneTimeKeyPair,
    message: bytes,
    counters: OpCounters | None = None,
) -> bytes:
    """Sign ``message`` once; a second call on the same keypair raises.

    Raises:
        OneTimeKeyReuseError: the keypair has already signed.
    """
    if counters is not None:
        counters.ots_sign_count += 1
    if keypair.used:
        raise OneTimeKeyReuseError("one-time signing key has already signed a message")
    if len(keypair.sign_key) != OTS_SIGN_KEY_LEN:
        raise ValueError("one-time signing key has the wrong length")
    digest = hashlib.sha256(message).digest()
    parts = []
    for i in range(OTS_MESSAGE_BITS):
        off = (_ots_bit(digest, i) * OTS_MESSAGE_BITS + i) * HASH_LEN
        parts.append(keypair.sign_key[off:off + HASH_LEN])
    keypair.used = True
    return b"".join(parts)


def ots_verify(
    verify_key: bytes,
    message: bytes,
    signature: bytes,
    counters: OpCounters | None = None,
) -> bool:
    """Check a Lamport signature; never raises on bad inputs."""
    if counters is not None:
        counters.ots_verify_count += 1
    if len(verify_key) != OTS_VERIFY_KEY_LEN or len(signature) != OTS_SIG_LEN:
        return False
    digest = hashlib.sha256(message).digest()
    for i in range(OTS_MESSAGE_BITS):
        off = (_ots_bit(digest, i) * OTS_MESSAGE_BITS + i) * HASH_LEN
        revealed = signature[i * HASH_LEN:(i + 1) * HASH_LEN]
        if hashlib.sha256(revealed).digest() != verify_key[off:off + HASH_LEN]:
            return False
    return True


# ---------------------------------------------------------------------------
# Reusable broadcaster signatures.

def sig_gen(
    params: SystemParams | None = None,
    rng: Rng | None = None,
) -> BroadcasterKeyPair:
    """Generate a long-term broadcaster keypair."""
    if params is not None and params.group_id != _GROUP_CURVE25519:
        raise UnsupportedSecurityLevelError(f"unknown group id: {params.group_id}")
    rng = rng or SYSTEM_RNG
    sk = rng.bytes(32)
    pk = Ed25519PrivateKey.from_private_bytes(sk).public_key().public_bytes_raw()
    return BroadcasterKeyPair(public_key=pk, secret_key=sk)


def broadcaster_from_secret(secret_key: bytes) -> BroadcasterKeyPair:
    """Rebuild the full broadcaster keypair from its stored secret half."""
    if len(secret_key) != 32:
        raise ValueError("broadcaster secret key must be 32 bytes")
    pk = Ed25519PrivateKey.from_private_bytes(secret_key).public_key().public_bytes_raw()
    return BroadcasterKeyPair(public_key=pk, secret_key=secret_key)


def sig_sign(
    secret_key: bytes,
    message: bytes,
    counters: OpCounters | None = None,
) -> bytes:
    """Sign ``message`` under a long-term broadcaster key."""
    if counters is not None:
        counters.sig_sign_count += 1
    if len(secret_key) != 32:
        raise ValueError("broadcaster secret key must be 32 bytes")
    return Ed25519PrivateKey.from_private_bytes(secret_key).sign(message)


def sig_verify(
    public_key: bytes,
    message: bytes,
    signature: bytes,
    counters: OpCounters | None = None,
) -> bool:
    """Check a broadcaster signature; never raises on bad inputs."""
    if counters is not None:
        counters.sig_verify_count += 1
    if len(public_key) != HEADER_LEN or len(signature) != SIG_LEN:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
    except (InvalidSignature, ValueError):
        return False
    return True


# ---------------------------------------------------------------------------
# Authenticated symmetric encryption.

def gen_sym_key(rng: Rng | None = None) -> bytes:
    return (rng or SYSTEM_RNG).bytes(SYM_KEY_LEN)


def sym_enc(
    key: bytes,
    message: bytes,
    rng: Rng | None = None,
    counters: OpCounters | None = None,
) -> bytes:
    """Encrypt and authenticate the message body: ``nonce || ct || tag``."""
    if counters is not None:
        counters.sym_enc_count += 1
    if len(key) != SYM_KEY_LEN:
        raise ValueError("symmetric key must be 32 bytes")
    nonce = (rng or SYSTEM_RNG).bytes(_SYM_NONCE_LEN)
    return nonce + AESGCM(key).encrypt(nonce, message, None)


def sym_dec(
    key: bytes,
    ciphertext: bytes,
    counters: OpCounters | None = None,
) -> bytes | None:
    """Decrypt a message body; ``None`` on wrong key or damaged data."""
    if counters is not None:
        counters.sym_dec_count += 1
    if len(key) != SYM_KEY_LEN:
        raise ValueError("symmetric key must be 32 bytes")
    if len(ciphertext) < SYM_OVERHEAD:
        return None
    nonce, ct = ciphertext[:_SYM_NONCE_LEN], ciphertext[_SYM_NONCE_LEN:]
    try:
        return AESGCM(key).decrypt(nonce, ct, None)
    except InvalidTag:
        return None
