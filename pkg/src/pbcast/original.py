"""Broadcast variant with a fresh one-time signature per ciphertext.

Encryption draws a Lamport keypair and a symmetric message key, seals
``verify_key || message_key`` to every recipient individually, shuffles the
components, encrypts the message body, and signs everything with the
one-time key.  The verify key travels *inside* the components, so a
recipient can only check the signature after a successful public-key
decryption — and in permissive mode it cannot even tell whether that
decryption succeeded, forcing one signature check per attempted component.

Nothing ties a ciphertext to its sender: anyone can generate a one-time
keypair and produce a ciphertext every recipient will accept.
"""

from __future__ import annotations

from .broadcast import MAX_MESSAGE, BroadcastCiphertext, MessageTooLongError, RecipientSet, Scheme
from .primitives import (
    OTS_VERIFY_KEY_LEN,
    SYM_KEY_LEN,
    MalformedComponentError,
    OpCounters,
    RecipientKeyPair,
    RejectMode,
    SystemParams,
    ots_gen,
    ots_sign,
    ots_verify,
    pke_dec,
    pke_enc,
    pke_gen,
    pke_init,
    sym_dec,
    sym_enc,
)
from .rng import SYSTEM_RNG, Rng

#: Per-recipient payload: one-time verify key followed by the message key.
PAYLOAD_LEN = OTS_VERIFY_KEY_LEN + SYM_KEY_LEN  # 16416


def setup(security_level: int = 128) -> SystemParams:
    return pke_init(security_level)


def keygen(params: SystemParams, rng: Rng | None = None) -> RecipientKeyPair:
    return pke_gen(params, rng=rng)


def encrypt(
    recipients: RecipientSet,
    message: bytes,
    rng: Rng | None = None,
    counters: OpCounters | None = None,
) -> BroadcastCiphertext:
    """Encrypt ``message`` so each listed recipient can recover it."""
    if len(message) > MAX_MESSAGE:
        raise MessageTooLongError(
            f"message is {len(message)} bytes; limit is {MAX_MESSAGE}"
        )
    rng = rng or SYSTEM_RNG
    one_time = ots_gen(rng=rng, counters=counters)
    message_key = rng.bytes(SYM_KEY_LEN)
    payload = one_time.verify_key + message_key
    components = [
        pke_enc(pk, payload, rng=rng, counters=counters) for pk in recipients
    ]
    rng.shuffle(components)
    message_ct = sym_enc(message_key, message, rng=rng, counters=counters)
    signature = ots_sign(
        one_time, b"".join(components) + message_ct, counters=counters
    )
    return BroadcastCiphertext(
        scheme=Scheme.ORIGINAL,
        signature=signature,
        components=tuple(components),
        message_ct=message_ct,
    )


def decrypt(
    secret_key: bytes,
    ciphertext: BroadcastCiphertext,
    mode: RejectMode = RejectMode.STRICT,
    counters: OpCounters | None = None,
) -> bytes | None:
    """Try each component in order; stop at the first verifying signature.

    Returns the message, or ``None`` when no component yields a payload
    whose one-time key verifies the ciphertext signature.  In permissive
    mode every attempted component costs one public-key decryption *and*
    one signature verification, because a failed decryption still hands
    back plausible-looking bytes.
    """
    if ciphertext.scheme is not Scheme.ORIGINAL:
        raise ValueError(f"expected an {Scheme.ORIGINAL.label} ciphertext")
    signed = ciphertext.signed_bytes
    for component in ciphertext.components:
        try:
            payload = pke_dec(secret_key, component, mode=mode, counters=counters)
        except MalformedComponentError:
            continue
        if payload is None or len(payload) != PAYLOAD_LEN:
            continue
        verify_key = payload[:OTS_VERIFY_KEY_LEN]
        message_key = payload[OTS_VERIFY_KEY_LEN:]
        if ots_verify(verify_key, signed, ciphertext.signature, counters=counters):
            return sym_dec(message_key, ciphertext.message_ct, counters=counters)
    return None
