"""Seeded random sets over each built-in group, and independent reference code."""
from __future__ import annotations

import itertools
import random

from effsum.groups import CayleyGroup, CyclicGroup, FinSetGroup, IntVecGroup, SymmetricGroup


def rand_intvec(rng: random.Random, g: IntVecGroup, k: int, lo=-5, hi=5) -> list:
    return [tuple(rng.randint(lo, hi) for _ in range(g.dim)) for _ in range(k)]


def rand_perm(rng: random.Random, g: SymmetricGroup, k: int) -> list:
    out = []
    for _ in range(k):
        p = list(range(1, g.n + 1))
        rng.shuffle(p)
        out.append(tuple(p))
    return out


def rand_cyclic(rng: random.Random, g: CyclicGroup, k: int) -> list:
    return [rng.randrange(g.n) for _ in range(k)]


def rand_finset(rng: random.Random, g: FinSetGroup, k: int, universe: int = 6) -> list:
    return [tuple(sorted(rng.sample(range(universe), rng.randint(0, 3)))) for _ in range(k)]


def rand_table(rng: random.Random, g: CayleyGroup, k: int) -> list:
    return [rng.randrange(g.order) for _ in range(k)]


# Klein four-group as an explicit table: a non-cyclic carrier for the table kind.
KLEIN = CayleyGroup([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])

GROUPS = [
    (IntVecGroup(2), rand_intvec),
    (IntVecGroup(3), rand_intvec),
    (SymmetricGroup(3), rand_perm),
    (SymmetricGroup(4), rand_perm),
    (CyclicGroup(7), rand_cyclic),
    (FinSetGroup(), rand_finset),
    (KLEIN, rand_table),
]


def random_sets(seed: int, count: int = 3, max_size: int = 5):
    """A group and ``count`` nonempty random sets over it, chosen by ``seed``."""
    rng = random.Random(seed)
    g, draw = GROUPS[seed % len(GROUPS)]
    return g, [draw(rng, g, rng.randint(1, max_size)) for _ in range(count)]


def naive_efficient(S, related) -> set:
    """Literal definition: keep x unless some y has y R x and not x R y."""
    S = set(S)
    return {x for x in S if not any(related(y, x) and not related(x, y) for y in S)}


def naive_sum(A, B, op) -> set:
    return {op(a, b) for a, b in itertools.product(A, B)}
