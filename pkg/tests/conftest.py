from dataclasses import dataclass

import pytest

from pbcast import RecipientSet, Rng, Scheme
from pbcast.primitives import (
    BroadcasterKeyPair,
    RecipientKeyPair,
    SystemParams,
    pke_gen,
    pke_init,
    sig_gen,
)


@dataclass
class World:
    """A small honest deployment: parameters, members, one broadcaster."""

    params: SystemParams
    members: list[RecipientKeyPair]
    broadcaster: BroadcasterKeyPair
    rng: Rng

    @property
    def recipients(self) -> RecipientSet:
        return RecipientSet(tuple(kp.public_key for kp in self.members))

    def outsider(self) -> RecipientKeyPair:
        return pke_gen(self.params, rng=self.rng)


@pytest.fixture
def make_world():
    def _make(n: int, seed=0xBCA57) -> World:
        rng = Rng(seed)
        params = pke_init()
        members = [pke_gen(params, rng=rng) for _ in range(n)]
        return World(params=params, members=members,
                     broadcaster=sig_gen(params, rng=rng), rng=rng)

    return _make


@pytest.fixture(params=[Scheme.ORIGINAL, Scheme.IMPROVED],
                ids=["original", "improved"])
def scheme(request) -> Scheme:
    return request.param
