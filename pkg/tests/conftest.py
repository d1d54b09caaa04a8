"""Session fixtures: the two pipeline levels and the random corpora."""

from __future__ import annotations

import pytest

from twcheck import build_level
from twcheck.corpus import random_monoids, random_semigroups

CORPUS_SEED = 20260823
MONOID_SEED = 99


@pytest.fixture(scope="session")
def ell2():
    return build_level(2)


@pytest.fixture(scope="session")
def ell3():
    return build_level(3)


@pytest.fixture(scope="session")
def corpus():
    return random_semigroups(1000, max_order=8, seed=CORPUS_SEED)


@pytest.fixture(scope="session")
def monoid_corpus():
    return random_monoids(250, max_order=8, seed=MONOID_SEED)
