"""Injectable randomness for every key, nonce, and shuffle in the package.

All generation routines accept an ``Rng``.  Unseeded instances read the
operating system's entropy pool; seeded instances expand the seed through an
AES-256-CTR keystream, giving reproducible keys, ciphertexts, and component
orderings for the test suites and the command line ``--seed`` flag.
"""

from __future__ import annotations

import hashlib
import os

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

_SEED_DOMAIN = b"pbcast.rng.v1"


class Rng:
    """Byte-oriented randomness source, optionally deterministic.

    Args:
        seed: ``None`` for system entropy, or an int / str / bytes seed for
            a deterministic stream.
    """

    def __init__(self, seed: int | str | bytes | None = None):
        if seed is None:
            self._stream = None
            return
        if isinstance(seed, int):
            seed = seed.to_bytes((seed.bit_length() + 8) // 8, "big", signed=True)
        elif isinstance(seed, str):
            seed = seed.encode()
        elif not isinstance(seed, (bytes, bytearray)):
            raise TypeError(f"unsupported seed type: {type(seed).__name__}")
        key = hashlib.sha256(_SEED_DOMAIN + bytes(seed)).digest()
        cipher = Cipher(algorithms.AES(key), modes.CTR(b"\x00" * 16))
        self._stream = cipher.encryptor()

    @property
    def seeded(self) -> bool:
        return self._stream is not None

    def bytes(self, n: int) -> bytes:
        """Return ``n`` fresh random bytes."""
        if n < 0:
            raise ValueError("byte count must be non-negative")
        if self._stream is None:
            return os.urandom(n)
        return self._stream.update(b"\x00" * n)

    def randbelow(self, bound: int) -> int:
        """Return a uniform integer in ``[0, bound)`` via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        bits = (bound - 1).bit_length()
        nbytes = (bits + 7) // 8
        shift = nbytes * 8 - bits
        while True:
            candidate = int.from_bytes(self.bytes(nbytes), "big") >> shift
            if candidate < bound:
                return candidate

    def shuffle(self, items: list) -> None:
        """Uniform in-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


#: Shared unseeded instance used whenever a caller does not inject one.
SYSTEM_RNG = Rng()
