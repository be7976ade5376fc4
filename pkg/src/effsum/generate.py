"""Seeded random instances over integer vectors under the product order.

Each family is built so that a particular rule's hypotheses hold:

==========================  ==================================================
``orthant_holds``           ``0 ∈ B`` and ``0 R b`` for every ``b`` (T2)
``dominating_fails``        some ``b P 0`` (T4)
``dominated_fails``         ``0 P b`` for every ``b`` (T3)
``incomparable_fails``      every ``b`` incomparable with ``0`` (T7/T8)
``with_zero_incomparable``  ``B = {0} ∪ incomparables``, ``A`` stable (T9/T10)
``random``                  no structure
==========================  ==================================================

The same ``(seed, family, sizes)`` always yields the same instance.
"""
from __future__ import annotations

import random
from typing import Callable

from .audit import AuditConfig
from .errors import InvalidSizes
from .groups import FiniteSet, IntVecGroup
from .instance import Instance
from .relations import ProductOrder, efficient_set

FAMILIES = (
    "orthant_holds",
    "dominating_fails",
    "dominated_fails",
    "incomparable_fails",
    "with_zero_incomparable",
    "random",
)

Vec = tuple


def _vec(rng: random.Random, dim: int, lo: int, hi: int) -> Vec:
    return tuple(rng.randint(lo, hi) for _ in range(dim))


def _sample(rng, count: int, draw: Callable[[], Vec], pool: int, label: str) -> list[Vec]:
    if count > pool:
        raise InvalidSizes(f"cannot draw {count} distinct {label} from {pool} candidates")
    out: dict[Vec, None] = {}
    while len(out) < count:
        out[draw()] = None
    return list(out)


def _nonpositive(rng, dim, lo, hi) -> Vec:
    return tuple(rng.randint(lo, 0) for _ in range(dim))


def _nonnegative(rng, dim, lo, hi) -> Vec:
    return tuple(rng.randint(0, hi) for _ in range(dim))


def _incomparable(rng, dim, lo, hi) -> Vec:
    while True:
        v = _vec(rng, dim, lo, hi)
        if any(c > 0 for c in v) and any(c < 0 for c in v):
            return v


def generate_instance(
    seed: int,
    family: str,
    size_a: int = 5,
    size_b: int = 3,
    dim: int = 2,
    lo: int = -5,
    hi: int = 5,
) -> Instance:
    """Draw one instance of ``family``.

    ``size_b`` counts every element of ``B``, the identity included. Families
    that need ``0 ∈ B`` plus at least one other element use
    ``max(size_b, 2)``. For ``with_zero_incomparable``, ``A`` is replaced by
    its efficient set, so it may come out smaller than ``size_a``.
    """
    if family not in FAMILIES:
        raise InvalidSizes(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    for label, v in (("size_a", size_a), ("size_b", size_b), ("dim", dim)):
        if not isinstance(v, int) or v < 1:
            raise InvalidSizes(f"{label} must be a positive integer, got {v!r}")
    if lo > -1 or hi < 1:
        raise InvalidSizes("coordinate range must include -1 and 1")
    rng = random.Random(f"{family}:{seed}:{size_a}:{size_b}:{dim}:{lo}:{hi}")
    width = hi - lo + 1
    zero = (0,) * dim
    A = _sample(rng, size_a, lambda: _vec(rng, dim, lo, hi), width ** dim, "points")

    if family == "orthant_holds":
        def draw():
            v = zero
            while v == zero:
                v = _nonpositive(rng, dim, lo, hi)
            return v
        B = [zero, *_sample(rng, size_b - 1, draw, (1 - lo) ** dim - 1, "orthant points")]
    elif family == "dominating_fails":
        lead = zero
        while lead == zero:
            lead = _nonnegative(rng, dim, lo, hi)
        B = [lead, *(_vec(rng, dim, lo, hi) for _ in range(size_b - 1))]
    elif family == "dominated_fails":
        def draw():
            v = zero
            while v == zero:
                v = _nonpositive(rng, dim, lo, hi)
            return v
        B = _sample(rng, size_b, draw, (1 - lo) ** dim - 1, "dominated points")
    elif family == "incomparable_fails":
        B = _sample(rng, size_b, lambda: _incomparable(rng, dim, lo, hi), width ** dim, "incomparable points")
    elif family == "with_zero_incomparable":
        k = max(size_b, 2) - 1
        B = [zero, *_sample(rng, k, lambda: _incomparable(rng, dim, lo, hi), width ** dim, "incomparable points")]
        A = list(efficient_set(A, ProductOrder()).efficient)
    else:
        B = [_vec(rng, dim, lo, hi) for _ in range(size_b)]

    return Instance(IntVecGroup(dim), ProductOrder(), FiniteSet(A), FiniteSet(B),
                    name=f"{family}-{seed}")


def sweep_sizes(seed: int, family: str, max_a: int = 12, max_b: int = 6) -> dict:
    """Sizes for sweep instance ``seed``: ``dim`` alternates 2/3, sizes vary."""
    rng = random.Random(f"sizes:{family}:{seed}")
    return {"size_a": rng.randint(1, max_a), "size_b": rng.randint(1, max_b), "dim": 2 + seed % 2}


FAST_AUDIT = AuditConfig(depth=1, cap=256, spot_checks=40, budget=4_000)


def generate_multi_summand(seed: int, summands: int, size_a: int = 5, size_b: int = 3,
                           dim: int = 2, lo: int = -3) -> Instance:
    """``A`` plus ``summands`` sets, each ``{0}`` and nonzero nonpositive vectors."""
    if summands < 1:
        raise InvalidSizes(f"need at least one summand, got {summands}")
    base = generate_instance(seed, "orthant_holds", size_a, size_b, dim, lo, max(1, -lo))
    rng = random.Random(f"multi:{seed}:{summands}:{size_a}:{size_b}:{dim}:{lo}")
    zero = (0,) * dim

    def draw():
        v = zero
        while v == zero:
            v = _nonpositive(rng, dim, lo, 0)
        return v

    extra = tuple(
        FiniteSet([zero, *_sample(rng, rng.randint(1, size_b) - 1, draw, (1 - lo) ** dim - 1,
                                  "orthant points")])
        for _ in range(summands - 1)
    )
    return Instance(base.group, base.relation, base.A, base.B, extra,
                    name=f"multi-{summands}-{seed}")
