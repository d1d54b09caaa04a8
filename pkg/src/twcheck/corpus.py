"""Seeded corpora of small semigroups and monoids for cross-validation."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .semigroups import FiniteSemigroup


def _random_table_semigroup(rng: np.random.Generator, n: int) -> FiniteSemigroup:
    """Rejection-sample an associative multiplication table on n elements.

    Only usable for n <= 3; associative tables are vanishingly rare beyond
    that.
    """
    while True:
        tables = rng.integers(0, n, size=(256, n, n), dtype=np.int32)
        for t in tables:
            ok = True
            for x in range(n):
                if not np.array_equal(t[t[x]], t[x][t]):
                    ok = False
                    break
            if ok:
                return FiniteSemigroup(order=n, table=t.copy())


def _random_transformation_semigroup(
    rng: np.random.Generator, max_order: int
) -> FiniteSemigroup | None:
    """Close a few random transformations of a small set under composition."""
    ns = int(rng.integers(3, 6))
    k = int(rng.integers(2, 4))
    gens = rng.integers(0, ns, size=(k, ns), dtype=np.int32)
    elems, parent, via, rmul, gen_index, overflow = _kernels.closure(
        np.ascontiguousarray(gens), max_order
    )
    if overflow or not 2 <= elems.shape[0] <= max_order:
        return None
    table = _kernels.mul_table(parent, via, rmul)
    return FiniteSemigroup(
        order=elems.shape[0], table=table, transformations=elems
    )


def random_semigroups(
    count: int, max_order: int = 8, seed: int = 0
) -> list[FiniteSemigroup]:
    """A deterministic mixed corpus: raw random tables at orders 2 and 3,
    transformation closures up to max_order."""
    rng = np.random.default_rng(seed)
    out: list[FiniteSemigroup] = []
    while len(out) < count:
        if max_order >= 4 and rng.random() < 0.6:
            s = _random_transformation_semigroup(rng, max_order)
            if s is None:
                continue
        else:
            s = _random_table_semigroup(rng, int(rng.integers(2, 4)))
        assert s.verify_associativity()
        out.append(s)
    return out


def random_monoids(
    count: int, max_order: int = 8, seed: int = 0
) -> list[FiniteSemigroup]:
    """Like random_semigroups but every element of the corpus has an
    identity, adjoining one when the sampled semigroup lacks it."""
    rng = np.random.default_rng(seed)
    out: list[FiniteSemigroup] = []
    while len(out) < count:
        if max_order >= 5 and rng.random() < 0.6:
            s = _random_transformation_semigroup(rng, max_order - 1)
            if s is None:
                continue
        else:
            s = _random_table_semigroup(rng, int(rng.integers(2, 4)))
        if not s.is_monoid():
            s = s.adjoin_identity()
        if s.order > max_order:
            continue
        assert s.verify_associativity()
        out.append(s)
    return out
