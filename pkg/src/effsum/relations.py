"""Comparison relations and efficient sets.

A relation ``R`` reads "at least as good as". Its strict part is
``x P y  <=>  xRy and not yRx`` and incomparability is
``x I y  <=>  neither xRy nor yRx``.
"""
from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import CarrierMismatch, ChainOverflow, NotApplicable, ValidationError
from .groups import FiniteSet, GroupContext

Element = Hashable

PROPERTY_IDS = ("REFL", "P1", "P2", "P3", "P4", "P4p", "P5", "P5p")


class Comparison(enum.Enum):
    EQUAL = "Equal"
    EQUIVALENT_DISTINCT = "EquivalentDistinct"
    STRICT_FORWARD = "StrictForward"
    STRICT_BACKWARD = "StrictBackward"
    INCOMPARABLE = "Incomparable"

    def mirror(self) -> "Comparison":
        if self is Comparison.STRICT_FORWARD:
            return Comparison.STRICT_BACKWARD
        if self is Comparison.STRICT_BACKWARD:
            return Comparison.STRICT_FORWARD
        return self


class RelationOracle:
    """Base class for reflexive comparison relations.

    ``declared`` lists the properties that hold analytically for every
    carrier the relation accepts. Audits spot-check them; theorem rules may
    rely on them.
    """

    kind: str = ""
    declared: frozenset = frozenset()

    def related(self, x: Element, y: Element) -> bool:
        raise NotImplementedError

    def strictly(self, x: Element, y: Element) -> bool:
        return self.related(x, y) and not self.related(y, x)

    def incomparable(self, x: Element, y: Element) -> bool:
        return not self.related(x, y) and not self.related(y, x)

    def compatible_with(self, g: GroupContext) -> bool:
        return True

    def check_element(self, x: Element) -> None:
        """Raise ``CarrierMismatch`` if ``x`` cannot be compared."""

    def descriptor(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(self.descriptor()))


class ProductOrder(RelationOracle):
    """Larger-is-better componentwise order on integer vectors."""

    kind = "product_order"
    declared = frozenset({"REFL", "P1", "P2", "P3"})

    def related(self, x, y):
        return all(map(operator.ge, x, y))

    def strictly(self, x, y):
        return x != y and all(map(operator.ge, x, y))

    def compatible_with(self, g):
        return g.kind == "intvec"


class FixedPoints(RelationOracle):
    """``pi R sigma`` iff ``pi`` has at least as many fixed points as ``sigma``."""

    kind = "fixed_points"
    declared = frozenset({"REFL", "P1"})

    @staticmethod
    def fixed_count(perm: Sequence[int]) -> int:
        return sum(1 for i, img in enumerate(perm, start=1) if i == img)

    def related(self, x, y):
        return self.fixed_count(x) >= self.fixed_count(y)

    def compatible_with(self, g):
        return g.kind == "perm"


class Equality(RelationOracle):
    kind = "equality"
    declared = frozenset({"REFL", "P1", "P2", "P3"})

    def related(self, x, y):
        return x == y


class Superset(RelationOracle):
    """``X R Y`` iff ``Y`` is a subset of ``X``."""

    kind = "superset"
    declared = frozenset({"REFL", "P1", "P2"})

    def related(self, x, y):
        return set(y).issubset(x)

    def compatible_with(self, g):
        return g.kind == "finset"


class ExplicitMatrix(RelationOracle):
    """A relation given as a boolean matrix over an explicit carrier."""

    kind = "explicit_matrix"

    def __init__(self, carrier: Sequence[Element], matrix: Sequence[Sequence[Any]]):
        carrier = list(carrier)
        n = len(carrier)
        if len(set(carrier)) != n:
            raise ValidationError("explicit_matrix carrier has duplicate elements")
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValidationError(f"explicit_matrix must be {n}x{n}")
        rows = tuple(tuple(bool(v) for v in row) for row in matrix)
        for i in range(n):
            if not rows[i][i]:
                raise ValidationError(f"explicit_matrix is not reflexive at {carrier[i]!r}")
        self.carrier = tuple(carrier)
        self.matrix = rows
        self._index = {x: i for i, x in enumerate(carrier)}

    def index(self, x: Element) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise CarrierMismatch(f"{x!r} is outside the explicit_matrix carrier") from None

    def related(self, x, y):
        return self.matrix[self.index(x)][self.index(y)]

    def check_element(self, x):
        self.index(x)

    def compatible_with(self, g):
        return all(g.contains(x) for x in self.carrier)

    def covers(self, g: GroupContext) -> bool:
        """True when the carrier is the whole (finite) group."""
        return g.is_finite and g.order == len(self.carrier) and self.compatible_with(g)

    def descriptor(self):
        return {
            "kind": self.kind,
            "carrier": [list(x) if isinstance(x, tuple) else x for x in self.carrier],
            "matrix": [[int(v) for v in row] for row in self.matrix],
        }

    def __repr__(self):
        return f"ExplicitMatrix(n={len(self.carrier)})"


_SIMPLE = {cls.kind: cls for cls in (ProductOrder, FixedPoints, Equality, Superset)}


def relation_from_descriptor(desc: Any, g: GroupContext) -> RelationOracle:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValidationError(f"relation descriptor must be an object with 'kind', got {desc!r}")
    kind = desc["kind"]
    if kind in _SIMPLE:
        rel = _SIMPLE[kind]()
    elif kind == "explicit_matrix":
        carrier = desc.get("carrier")
        matrix = desc.get("matrix")
        if not isinstance(carrier, list) or not isinstance(matrix, list):
            raise ValidationError("explicit_matrix needs 'carrier' and 'matrix' arrays")
        rel = ExplicitMatrix([g.decode(x) for x in carrier], matrix)
    else:
        raise ValidationError(f"unknown relation kind {kind!r}")
    if not rel.compatible_with(g):
        raise ValidationError(f"relation {kind!r} cannot compare elements of a {g.kind} group")
    return rel


# ---------------------------------------------------------------------------
# operations


def compare(x: Element, y: Element, rel: RelationOracle) -> Comparison:
    rel.check_element(x)
    rel.check_element(y)
    fwd, bwd = rel.related(x, y), rel.related(y, x)
    if fwd and bwd:
        return Comparison.EQUAL if x == y else Comparison.EQUIVALENT_DISTINCT
    if fwd:
        return Comparison.STRICT_FORWARD
    if bwd:
        return Comparison.STRICT_BACKWARD
    return Comparison.INCOMPARABLE


@dataclass(frozen=True)
class EfficiencyPartition:
    efficient: FiniteSet
    dominated: FiniteSet


def efficient_set(S: Iterable[Element], rel: RelationOracle) -> EfficiencyPartition:
    """Split ``S`` into its efficient points and the strictly dominated rest.

    ``g`` is efficient when no ``g'`` in ``S`` has ``g' P g``. The empty set
    has an empty efficient set.
    """
    pts = FiniteSet(S)
    for x in pts:
        rel.check_element(x)
    strictly = rel.strictly
    if "P1" in rel.declared:
        # transitive: a dominated point is dominated by a surviving candidate
        kept: list = []
        for x in pts:
            if any(strictly(k, x) for k in kept):
                continue
            kept = [k for k in kept if not strictly(x, k)]
            kept.append(x)
        eff = FiniteSet(kept)
        return EfficiencyPartition(eff, pts.difference(eff))
    efficient, dominated = [], []
    for x in pts:
        for y in pts:
            if strictly(y, x):
                dominated.append(x)
                break
        else:
            efficient.append(x)
    return EfficiencyPartition(FiniteSet(efficient), FiniteSet(dominated))


def is_stable(S: Iterable[Element], rel: RelationOracle) -> bool:
    return not efficient_set(S, rel).dominated


def transitivity_violation(S: Iterable[Element], rel: RelationOracle):
    """First ``(x, y, z)`` in canonical order with xRy, yRz but not xRz."""
    pts = FiniteSet(S)
    related = rel.related
    for x in pts:
        for y in pts:
            if not related(x, y):
                continue
            for z in pts:
                if related(y, z) and not related(x, z):
                    return (x, y, z)
    return None


def white_witness(S: Iterable[Element], rel: RelationOracle) -> Mapping[Element, Element]:
    """Map every point of ``S`` to an efficient point at least as good as it.

    Dominated points are walked up through their canonical-least strict
    dominator until an efficient point is reached. A walk longer than ``|S|``
    steps means strict dominance cycles on ``S`` (``ChainOverflow``); a
    finished walk whose end is not related to its start means the relation is
    not transitive on ``S`` (``NotApplicable``).
    """
    pts = FiniteSet(S)
    if not pts:
        raise NotApplicable("white_witness needs a nonempty set")
    for x in pts:
        rel.check_element(x)
    strictly = rel.strictly
    dominator = {}
    for x in pts:
        for y in pts:
            if strictly(y, x):
                dominator[x] = y
                break
    witness = {}
    for a in pts:
        cur, steps = a, 0
        while cur in dominator:
            cur = dominator[cur]
            steps += 1
            if steps > len(pts):
                raise ChainOverflow(
                    f"domination chain from {a!r} exceeds {len(pts)} steps; strict dominance cycles"
                )
        if not rel.related(cur, a):
            bad = transitivity_violation(pts, rel)
            raise NotApplicable(f"relation is not transitive on the set, e.g. {bad!r}")
        witness[a] = cur
    return witness
