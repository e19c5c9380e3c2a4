"""Broadcast variant signed under a long-term broadcaster identity.

The broadcaster keeps a reusable signing keypair.  Each per-recipient
component seals ``broadcaster_pk || message_key``, so the broadcaster's
public key doubles as an in-component header; the outer signature is made
with the matching secret key.

Recipients hold a trusted copy of the broadcaster's public key and check
the outer signature *before* any public-key decryption.  A ciphertext that
is not signed by the expected broadcaster — forged, spliced, tampered, or
simply from a stranger — is dropped at a cost of one signature
verification and zero decryptions.  After a successful decryption the
header is compared against the trusted key, which filters out components
sealed for someone else (or garbage from permissive-mode decryption)
without touching the message body.
"""

from __future__ import annotations

from .broadcast import MAX_MESSAGE, BroadcastCiphertext, MessageTooLongError, RecipientSet, Scheme
from .primitives import (
    HEADER_LEN,
    SYM_KEY_LEN,
    BroadcasterKeyPair,
    MalformedComponentError,
    OpCounters,
    RecipientKeyPair,
    RejectMode,
    SystemParams,
    pke_dec,
    pke_enc,
    pke_gen,
    pke_init,
    sig_gen,
    sig_sign,
    sig_verify,
    sym_dec,
    sym_enc,
)
from .rng import SYSTEM_RNG, Rng

#: Per-recipient payload: broadcaster public key followed by the message key.
PAYLOAD_LEN = HEADER_LEN + SYM_KEY_LEN  # 64


def setup(security_level: int = 128) -> SystemParams:
    return pke_init(security_level)


def keygen(params: SystemParams, rng: Rng | None = None) -> RecipientKeyPair:
    return pke_gen(params, rng=rng)


def keygen_broadcaster(
    params: SystemParams, rng: Rng | None = None
) -> BroadcasterKeyPair:
    """Generate the broadcaster's long-term signing identity."""
    return sig_gen(params, rng=rng)


def encrypt(
    recipients: RecipientSet,
    message: bytes,
    broadcaster: BroadcasterKeyPair,
    rng: Rng | None = None,
    counters: OpCounters | None = None,
) -> BroadcastCiphertext:
    """Encrypt ``message`` to the recipients under the broadcaster identity.

    No one-time key material is involved; the only signing cost is one
    signature under the broadcaster's reusable key.
    """
    if len(message) > MAX_MESSAGE:
        raise MessageTooLongError(
            f"message is {len(message)} bytes; limit is {MAX_MESSAGE}"
        )
    rng = rng or SYSTEM_RNG
    message_key = rng.bytes(SYM_KEY_LEN)
    payload = broadcaster.public_key + message_key
    components = [
        pke_enc(pk, payload, rng=rng, counters=counters) for pk in recipients
    ]
    rng.shuffle(components)
    message_ct = sym_enc(message_key, message, rng=rng, counters=counters)
    signature = sig_sign(
        broadcaster.secret_key,
        b"".join(components) + message_ct,
        counters=counters,
    )
    return BroadcastCiphertext(
        scheme=Scheme.IMPROVED,
        signature=signature,
        components=tuple(components),
        message_ct=message_ct,
    )


def decrypt(
    secret_key: bytes,
    broadcaster_public_key: bytes,
    ciphertext: BroadcastCiphertext,
    mode: RejectMode = RejectMode.STRICT,
    counters: OpCounters | None = None,
) -> bytes | None:
    """Verify origin first, then scan components for one sealed to us.

    Args:
        secret_key: the recipient's secret key.
        broadcaster_public_key: the trusted broadcaster identity, obtained
            out of band — never taken from the ciphertext itself.
        ciphertext: a broadcaster-signed broadcast.
        mode: failure-reporting mode for the inner decryptions.
        counters: tallies; an invalid signature leaves every decryption
            counter at zero.

    Returns the message, or ``None`` if the signature is not the trusted
    broadcaster's or no component was sealed for this recipient.
    """
    if ciphertext.scheme is not Scheme.IMPROVED:
        raise ValueError(f"expected an {Scheme.IMPROVED.label} ciphertext")
    if len(broadcaster_public_key) != HEADER_LEN:
        raise ValueError("broadcaster public key must be 32 bytes")
    if not sig_verify(
        broadcaster_public_key,
        ciphertext.signed_bytes,
        ciphertext.signature,
        counters=counters,
    ):
        return None
    for component in ciphertext.components:
        try:
            payload = pke_dec(secret_key, component, mode=mode, counters=counters)
        except MalformedComponentError:
            continue
        if payload is None or len(payload) != PAYLOAD_LEN:
            continue
        if payload[:HEADER_LEN] != broadcaster_public_key:
            continue
        if counters is not None:
            counters.header_match_count += 1
        plaintext = sym_dec(
            payload[HEADER_LEN:], ciphertext.message_ct, counters=counters
        )
        if plaintext is None:
            continue
        return plaintext
    return None
