"""Build the contradiction system behind a failure verdict from instance data.

The incomparable-shift rules (T7–T10) are proved by contradiction: assuming
``E(A+B) = E(A)`` yields a system of equations and comparisons that cannot
hold. Here the points of ``A`` are indexed (efficient points first), rows
that are actually true in the instance become hypotheses, and rows that only
the contradiction assumption supplies are marked assumed.
"""
from __future__ import annotations

from .errors import NotApplicable
from .groups import FiniteSet, GroupContext
from .proofs import DerivationTrace, Row, SystemInstance, derive
from .relations import RelationOracle, efficient_set, white_witness


def _ordered_points(A: FiniteSet, rel: RelationOracle) -> tuple[list, int]:
    part = efficient_set(A, rel)
    return list(part.efficient) + list(part.dominated), len(part.efficient)


def _equation_row(i: int, points: list, bs: list, g: GroupContext) -> Row:
    """``a^i = a^j + b^l`` from a real decomposition, else an assumed row."""
    target = points[i - 1]
    for j, a in enumerate(points, start=1):
        for l, b in enumerate(bs, start=1):
            if g.combine(a, b) == target:
                return Row(i, j, l, "=")
    return Row(i, i % len(points) + 1, 1, "=", assumed=True)


def incomparable_shift_system(A, B, g: GroupContext, rel: RelationOracle) -> SystemInstance:
    """S0/S3 for stable ``A``, S1/S2 otherwise (``B`` all incomparable with 0)."""
    A, B = FiniteSet(A), FiniteSet(B)
    bs = list(B)
    points, k = _ordered_points(A, rel)
    n = len(points)
    multi = len(bs) > 1
    common = dict(group=g, elements=points, bs=bs, relation=rel, m=len(bs))
    if k == n:
        rows = [_equation_row(i, points, bs, g) for i in range(1, n + 1)]
        kind = "S3" if multi else "S0"
        notes = ("points indexed in canonical order; A is stable",)
        return SystemInstance(kind, n, rows, notes=notes, **common)
    witness = white_witness(A, rel)
    index = {x: i for i, x in enumerate(points, start=1)}
    rows = [_equation_row(i, points, bs, g) for i in range(1, k + 1)]
    rows += [Row(index[witness[points[j - 1]]], j, None, "P") for j in range(k + 1, n + 1)]
    kind = "S2" if multi else "S1"
    notes = (f"efficient points take indices 1..{k}, dominated points follow",)
    return SystemInstance(kind, n, rows, k=k, notes=notes, **common)


def zero_plus_incomparable_system(A, B, g: GroupContext, rel: RelationOracle) -> SystemInstance:
    """S4/S5 or MIXED for stable ``A`` and ``B = {0_G} ∪ incomparables``."""
    A = FiniteSet(A)
    bs = [b for b in FiniteSet(B) if b != g.identity]
    if not bs:
        raise NotApplicable("B has no element besides the identity")
    points = list(A)
    n = len(points)
    index = {x: i for i, x in enumerate(points, start=1)}
    left, rels, assumed = {}, {}, set()
    for j, a in enumerate(points, start=1):
        for l, b in enumerate(bs, start=1):
            z = g.combine(a, b)
            if z in index:
                left[(j, l)], rels[(j, l)] = index[z], "="
                continue
            dominators = [i for i, x in enumerate(points, start=1) if rel.strictly(x, z)]
            if dominators:
                # prefer a dominator other than the shifted point itself
                left[(j, l)] = next((i for i in dominators if i != j), dominators[0])
            else:
                left[(j, l)] = next((i for i in range(1, n + 1) if i != j), j)
                assumed.add((j, l))
            rels[(j, l)] = "P"
    rows = [Row(left[(j, l)], j, l, rels[(j, l)], (j, l) in assumed)
            for j in range(1, n + 1) for l in range(1, len(bs) + 1)]
    # a singleton A can only be compared with its own shift, which only the
    # mixed form admits
    plain = all(r.rel == "P" and r.left != r.right for r in rows)
    kind = ("S4" if len(bs) == 1 else "S5") if plain else "MIXED"
    return SystemInstance(kind, n, rows, m=len(bs), group=g, elements=points, bs=bs,
                          relation=rel, notes=("points indexed in canonical order",))


def refutation_system(rule: str, A, B, g: GroupContext, rel: RelationOracle) -> SystemInstance:
    if rule in ("T7", "T8"):
        return incomparable_shift_system(A, B, g, rel)
    if rule in ("T9", "T10"):
        return zero_plus_incomparable_system(A, B, g, rel)
    raise NotApplicable(f"no contradiction system is attached to rule {rule}")


def refutation_trace(rule: str, A, B, g: GroupContext, rel: RelationOracle) -> DerivationTrace:
    return derive(refutation_system(rule, A, B, g, rel))
