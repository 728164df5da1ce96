import random

import pytest

from twistcyc import complexes as cx
from twistcyc.localsys import Chain, Cochain, LocalSystem


def random_chain(L, p, rng, cls=Chain):
    X = L.complex
    vec = [rng.choice((-1, 0, 0, 1, 2)) for _ in range(X.count(p) * L.rank)]
    return cls.from_flat(L, p, vec)


def random_cochain(L, p, rng):
    return random_chain(L, p, rng, Cochain)


def torus_system(k, rank, rng):
    T = cx.Torus(k, 3)
    return T, T.system(cx.random_commuting(rank, k, rng))


@pytest.fixture
def rng():
    return random.Random(20240611)
