"""Instrumented adversary: attacks, cost experiments, and privacy probes.

Everything here plays the network attacker or the nosy observer:

* :func:`forge_origin` — produce a ciphertext from a party with no
  broadcast authority.  Recipients of the one-time-signature variant
  accept it (nothing authenticates the sender); recipients of the
  broadcaster-signed variant drop it at the signature check.
* :func:`splice_component` — graft the sealed components of an honest
  ciphertext onto an attacker-chosen message body, re-signing with either
  the copied signature or a fresh key.  Both variants must be rejected by
  both schemes: the copied signature does not cover the new bytes, and a
  fresh key is not the one recipients recover (or trust).
* :func:`run_cost_experiment` — measure what a decryption attempt costs a
  recipient, per trial, as raw operation counts.
* :func:`privacy_probe` — check that ciphertexts leak nothing about who
  can read them: constant length, uniformly shuffled component order, and
  no recipient key material in the serialized bytes.

Counts are collected through :class:`~pbcast.primitives.OpCounters`; no
wall-clock timing, so results are exact and machine-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from enum import Enum

from . import improved, original
from .broadcast import BroadcastCiphertext, RecipientSet, Scheme
from .primitives import (
    SYM_KEY_LEN,
    BroadcasterKeyPair,
    OpCounters,
    RejectMode,
    ots_gen,
    ots_sign,
    pke_dec,
    pke_gen,
    pke_init,
    sig_gen,
    sig_sign,
    sym_enc,
)
from .rng import SYSTEM_RNG, Rng
from .wire import serialize_ciphertext


class Role(Enum):
    """Whose key the measured decryptor holds."""

    MEMBER = "member"
    NONMEMBER = "nonmember"


# ---------------------------------------------------------------------------
# Attacks.

def forge_origin(
    recipients: RecipientSet,
    message: bytes,
    scheme: Scheme = Scheme.ORIGINAL,
    rng: Rng | None = None,
    broadcaster: BroadcasterKeyPair | None = None,
) -> BroadcastCiphertext:
    """Encrypt ``message`` to ``recipients`` without any authority to do so.

    For the one-time-signature scheme this is just honest encryption with a
    self-made key — which is the point: recipients cannot tell.  For the
    broadcaster-signed scheme the attacker signs with ``broadcaster`` (their
    own keypair, generated here if not supplied); recipients who trust a
    different key reject the result before decrypting anything.
    """
    rng = rng or SYSTEM_RNG
    if scheme is Scheme.ORIGINAL:
        return original.encrypt(recipients, message, rng=rng)
    if broadcaster is None:
        broadcaster = sig_gen(rng=rng)
    return improved.encrypt(recipients, message, broadcaster, rng=rng)


SPLICE_VARIANTS = ("copy-sig", "fresh-key")


def splice_component(
    ciphertext: BroadcastCiphertext,
    payload: bytes,
    variant: str = "copy-sig",
    rng: Rng | None = None,
) -> BroadcastCiphertext:
    """Reuse an honest ciphertext's sealed components over a new message body.

    Args:
        ciphertext: an honest broadcast whose components are worth stealing.
        payload: the attacker's replacement message.
        variant: ``"copy-sig"`` keeps the original signature; ``"fresh-key"``
            signs the spliced bytes with a key the attacker controls (a new
            one-time key or a new broadcaster key, matching the scheme).
        rng: attacker randomness.

    The result is well-formed on the wire; rejecting it is the schemes' job.
    """
    if variant not in SPLICE_VARIANTS:
        raise ValueError(f"unknown splice variant: {variant!r}")
    rng = rng or SYSTEM_RNG
    body = sym_enc(rng.bytes(SYM_KEY_LEN), payload, rng=rng)
    signed = b"".join(ciphertext.components) + body
    if variant == "copy-sig":
        signature = ciphertext.signature
    elif ciphertext.scheme is Scheme.ORIGINAL:
        signature = ots_sign(ots_gen(rng=rng), signed)
    else:
        signature = sig_sign(sig_gen(rng=rng).secret_key, signed)
    return BroadcastCiphertext(
        scheme=ciphertext.scheme,
        signature=signature,
        components=ciphertext.components,
        message_ct=body,
    )


@dataclass
class AttackOutcome:
    """What one attack attempt did to one recipient."""

    attack: str
    scheme: Scheme
    accepted: bool
    recovered: bytes | None
    counters: OpCounters

    def __post_init__(self):
        if self.accepted and self.recovered is None:
            raise ValueError("an accepted attack must have recovered a message")

    def describe(self) -> list[str]:
        c = self.counters
        lines = [
            f"attack:    {self.attack}",
            f"scheme:    {self.scheme.label}",
            f"accepted:  {'yes' if self.accepted else 'no (rejected)'}",
        ]
        if self.recovered is not None:
            shown = self.recovered[:48]
            suffix = "..." if len(self.recovered) > len(shown) else ""
            lines.append(f"recovered: {shown.hex()}{suffix}")
        lines.append(
            "recipient cost: "
            f"pke_dec={c.pke_dec_count} ots_verify={c.ots_verify_count} "
            f"sig_verify={c.sig_verify_count} sym_dec={c.sym_dec_count}"
        )
        return lines


def run_forge_origin(
    scheme: Scheme,
    n: int,
    message: bytes = b"entirely made up",
    mode: RejectMode = RejectMode.STRICT,
    rng: Rng | None = None,
) -> AttackOutcome:
    """Stand up an honest world, forge into it, and see if a member bites.

    The honest broadcaster's key exists and is what the member trusts; the
    forger never sees its secret half.
    """
    rng = rng or SYSTEM_RNG
    params = pke_init()
    members = [pke_gen(params, rng=rng) for _ in range(n)]
    trusted = sig_gen(params, rng=rng)
    forged = forge_origin(
        RecipientSet(tuple(kp.public_key for kp in members)),
        message,
        scheme=scheme,
        rng=rng,
    )
    counters = OpCounters()
    if scheme is Scheme.ORIGINAL:
        recovered = original.decrypt(
            members[0].secret_key, forged, mode=mode, counters=counters
        )
    else:
        recovered = improved.decrypt(
            members[0].secret_key, trusted.public_key, forged,
            mode=mode, counters=counters,
        )
    return AttackOutcome(
        attack="forge-origin",
        scheme=scheme,
        accepted=recovered is not None,
        recovered=recovered,
        counters=counters,
    )


def run_splice(
    scheme: Scheme,
    n: int,
    variant: str = "copy-sig",
    payload: bytes = b"swapped in after the fact",
    mode: RejectMode = RejectMode.STRICT,
    rng: Rng | None = None,
) -> AttackOutcome:
    """Splice an attacker message onto an honest broadcast and replay it."""
    rng = rng or SYSTEM_RNG
    params = pke_init()
    members = [pke_gen(params, rng=rng) for _ in range(n)]
    recipients = RecipientSet(tuple(kp.public_key for kp in members))
    trusted = sig_gen(params, rng=rng)
    if scheme is Scheme.ORIGINAL:
        honest = original.encrypt(recipients, b"the genuine article", rng=rng)
    else:
        honest = improved.encrypt(recipients, b"the genuine article", trusted, rng=rng)
    spliced = splice_component(honest, payload, variant=variant, rng=rng)
    counters = OpCounters()
    if scheme is Scheme.ORIGINAL:
        recovered = original.decrypt(
            members[0].secret_key, spliced, mode=mode, counters=counters
        )
    else:
        recovered = improved.decrypt(
            members[0].secret_key, trusted.public_key, spliced,
            mode=mode, counters=counters,
        )
    return AttackOutcome(
        attack=f"splice-{variant}",
        scheme=scheme,
        accepted=recovered is not None,
        recovered=recovered,
        counters=counters,
    )


# ---------------------------------------------------------------------------
# Cost measurement.

#: Counter fields reported by cost experiments, in output column order.
COST_COLUMNS = (
    ("pke_dec", "pke_dec_count"),
    ("ots_verify", "ots_verify_count"),
    ("sig_verify", "sig_verify_count"),
    ("sym_dec", "sym_dec_count"),
)


@dataclass
class CostReport:
    """Per-trial decryption cost for one (scheme, n, role, mode) cell."""

    scheme: Scheme
    n: int
    role: Role
    mode: RejectMode
    trial_counters: tuple[OpCounters, ...] = field(repr=False)

    @property
    def trials(self) -> int:
        return len(self.trial_counters)

    def column(self, counter_field: str) -> list[int]:
        return [getattr(c, counter_field) for c in self.trial_counters]

    def mean(self, counter_field: str) -> Fraction:
        """Exact mean of one counter across trials."""
        return Fraction(sum(self.column(counter_field)), self.trials)

    @property
    def means(self) -> dict[str, Fraction]:
        return {name: self.mean(attr) for name, attr in COST_COLUMNS}

    def csv_lines(self) -> list[str]:
        """Delimited rows: one per trial, then an aggregate ``mean`` row."""
        header = "scheme,n,role,mode,trial," + ",".join(n for n, _ in COST_COLUMNS)
        prefix = f"{self.scheme.label},{self.n},{self.role.value},{self.mode.value}"
        lines = [header]
        for t, c in enumerate(self.trial_counters):
            vals = ",".join(str(getattr(c, attr)) for _, attr in COST_COLUMNS)
            lines.append(f"{prefix},{t},{vals}")
        means = ",".join(f"{float(self.mean(attr)):g}" for _, attr in COST_COLUMNS)
        lines.append(f"{prefix},mean,{means}")
        return lines

    def summary_lines(self) -> list[str]:
        parts = ", ".join(f"{name}={float(v):g}" for name, v in self.means.items())
        return [
            f"{self.scheme.label} scheme, n={self.n}, {self.role.value} "
            f"recipient, {self.mode.value} mode, {self.trials} trials",
            f"mean per decryption attempt: {parts}",
        ]


def run_cost_experiment(
    scheme: Scheme,
    n: int,
    role: Role,
    mode: RejectMode,
    trials: int,
    message_len: int = 64,
    rng: Rng | None = None,
) -> CostReport:
    """Measure recipient-side decryption cost over freshly keyed trials.

    Each trial builds an independent world (keys, message, broadcast),
    hands the ciphertext to either a member or an outsider, and records
    only the decryption's operation counts.  The harness also insists the
    functional outcome is the expected one — a member must recover the
    message, an outsider must not — so a miscounting bug cannot hide
    behind a broken scheme.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if n <= 0:
        raise ValueError("n must be positive")
    rng = rng or SYSTEM_RNG
    params = pke_init()
    per_trial = []
    for _ in range(trials):
        members = [pke_gen(params, rng=rng) for _ in range(n)]
        recipients = RecipientSet(tuple(kp.public_key for kp in members))
        message = rng.bytes(message_len)
        if scheme is Scheme.ORIGINAL:
            ct = original.encrypt(recipients, message, rng=rng)
        else:
            broadcaster = sig_gen(params, rng=rng)
            ct = improved.encrypt(recipients, message, broadcaster, rng=rng)
        if role is Role.MEMBER:
            secret_key = members[0].secret_key
        else:
            secret_key = pke_gen(params, rng=rng).secret_key
        counters = OpCounters()
        if scheme is Scheme.ORIGINAL:
            out = original.decrypt(secret_key, ct, mode=mode, counters=counters)
        else:
            out = improved.decrypt(
                secret_key, broadcaster.public_key, ct, mode=mode, counters=counters
            )
        if role is Role.MEMBER and out != message:
            raise RuntimeError("cost harness: member failed to recover the message")
        if role is Role.NONMEMBER and out is not None:
            raise RuntimeError("cost harness: outsider recovered a message")
        per_trial.append(counters)
    return CostReport(
        scheme=scheme, n=n, role=role, mode=mode, trial_counters=tuple(per_trial)
    )


# ---------------------------------------------------------------------------
# Privacy probes.

def component_owner_order(
    secret_keys: list[bytes], ciphertext: BroadcastCiphertext
) -> tuple[int, ...]:
    """Recover which recipient owns each component, by trial decryption.

    Analysis-only oracle: uses the full set of secret keys, which no real
    party holds.  Honest encryption yields a perfect matching, so once all
    but one recipient are placed the last assignment is forced.
    """
    remaining = list(range(len(secret_keys)))
    order: list[int] = []
    for component in ciphertext.components:
        if len(remaining) == 1:
            order.append(remaining.pop())
            continue
        owner = None
        for i in remaining:
            if pke_dec(secret_keys[i], component, mode=RejectMode.STRICT) is not None:
                owner = i
                break
        if owner is None:
            raise RuntimeError("component does not decrypt under any candidate key")
        order.append(owner)
        remaining.remove(owner)
    return tuple(order)


@dataclass
class PrivacyReport:
    """Results of the three recipient-privacy probes."""

    scheme: Scheme
    n: int
    message_len: int
    serialized_lengths: tuple[int, ...]
    order_counts: dict[tuple[int, ...], int]
    order_p_value: float
    pk_substring_hits: int

    @property
    def length_is_uniform(self) -> bool:
        return len(set(self.serialized_lengths)) == 1

    def describe(self) -> list[str]:
        return [
            f"{self.scheme.label} scheme, n={self.n}, |message|={self.message_len}",
            f"distinct serialized lengths over {len(self.serialized_lengths)} "
            f"recipient sets: {sorted(set(self.serialized_lengths))}",
            f"component order chi-square p-value over "
            f"{sum(self.order_counts.values())} broadcasts: {self.order_p_value:.4f}",
            f"recipient key bytes found in serialized ciphertexts: "
            f"{self.pk_substring_hits}",
        ]


def privacy_probe(
    scheme: Scheme = Scheme.ORIGINAL,
    n: int = 3,
    length_sets: int = 30,
    order_trials: int = 600,
    leak_ciphertexts: int = 30,
    message_len: int = 64,
    rng: Rng | None = None,
) -> PrivacyReport:
    """Probe a scheme for recipient-identity leakage.

    Three independent checks: serialized length must not vary with the
    recipient set, component order must be uniform over all permutations
    (chi-squared against the flat distribution), and no recipient public
    key may appear as a substring of any serialized ciphertext.
    """
    from scipy.stats import chisquare  # heavyweight import, only needed here

    rng = rng or SYSTEM_RNG
    params = pke_init()

    def broadcast_once(keypairs, message):
        recipients = RecipientSet(tuple(kp.public_key for kp in keypairs))
        if scheme is Scheme.ORIGINAL:
            return original.encrypt(recipients, message, rng=rng)
        return improved.encrypt(recipients, message, sig_gen(params, rng=rng), rng=rng)

    lengths = []
    for _ in range(length_sets):
        keypairs = [pke_gen(params, rng=rng) for _ in range(n)]
        ct = broadcast_once(keypairs, rng.bytes(message_len))
        lengths.append(len(serialize_ciphertext(ct)))

    counts: dict[tuple[int, ...], int] = {}
    for _ in range(order_trials):
        keypairs = [pke_gen(params, rng=rng) for _ in range(n)]
        ct = broadcast_once(keypairs, rng.bytes(message_len))
        order = component_owner_order([kp.secret_key for kp in keypairs], ct)
        counts[order] = counts.get(order, 0) + 1
    if order_trials:
        observed = [counts.get(p, 0) for p in sorted(_permutations(n))]
        _, p_value = chisquare(observed)
    else:
        p_value = float("nan")

    hits = 0
    for _ in range(leak_ciphertexts):
        keypairs = [pke_gen(params, rng=rng) for _ in range(n)]
        blob = serialize_ciphertext(broadcast_once(keypairs, rng.bytes(message_len)))
        hits += sum(1 for kp in keypairs if kp.public_key in blob)

    return PrivacyReport(
        scheme=scheme,
        n=n,
        message_len=message_len,
        serialized_lengths=tuple(lengths),
        order_counts=counts,
        order_p_value=float(p_value),
        pk_substring_hits=hits,
    )


def _permutations(n: int) -> list[tuple[int, ...]]:
    from itertools import permutations

    return [tuple(p) for p in permutations(range(n))]
