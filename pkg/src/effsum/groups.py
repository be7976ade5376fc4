"""Group arithmetic for the built-in carriers and Minkowski sums of finite sets.

Elements are plain hashable Python values so they can be used as dict keys
and sorted directly:

* ``IntVecGroup``   -- tuples of ints, componentwise addition
* ``SymmetricGroup`` -- one-line image tuples over ``1..n``, composition with
  the left operand acting first, so that ``(12) + (123) = (13)``
* ``CyclicGroup``   -- ints modulo ``n``
* ``FinSetGroup``   -- strictly increasing tuples of naturals under symmetric
  difference (finite-support subsets of the naturals)
* ``CayleyGroup``   -- indices into a validated Cayley table

Python's built-in ordering on these encodings is the canonical order used
everywhere for output order and tie-breaking.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import CarrierMismatch, EmptyOperand, PreconditionError, ValidationError

Element = Hashable


class FiniteSet(tuple):
    """Deduplicated, canonically ordered tuple of group elements."""

    def __new__(cls, elements: Iterable[Element] = ()):
        return super().__new__(cls, sorted(set(elements)))

    def __repr__(self) -> str:
        return f"FiniteSet({list(self)!r})"

    def union(self, other: Iterable[Element]) -> "FiniteSet":
        return FiniteSet(itertools.chain(self, other))

    def difference(self, other: Iterable[Element]) -> "FiniteSet":
        drop = set(other)
        return FiniteSet(x for x in self if x not in drop)


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


class GroupContext(ABC):
    """A group together with an element encoding.

    Subclasses are immutable and safe to share between threads.
    """

    kind: str = ""

    @property
    @abstractmethod
    def identity(self) -> Element: ...

    @abstractmethod
    def contains(self, x: Any) -> bool: ...

    @abstractmethod
    def _combine(self, x: Element, y: Element) -> Element: ...

    @abstractmethod
    def _inverse(self, x: Element) -> Element: ...

    @abstractmethod
    def descriptor(self) -> dict: ...

    @abstractmethod
    def decode(self, raw: Any) -> Element:
        """Turn a JSON value into an element, raising ``ValidationError``."""

    def encode(self, x: Element) -> Any:
        return list(x) if isinstance(x, tuple) else x

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` for infinite carriers."""
        return None

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def elements(self) -> Iterator[Element]:
        raise NotImplementedError(f"{self.kind} carrier is infinite")

    def check(self, *xs: Element) -> None:
        for x in xs:
            if not self.contains(x):
                raise CarrierMismatch(f"{x!r} is not an element of {self!r}")

    def combine(self, x: Element, y: Element) -> Element:
        self.check(x, y)
        return self._combine(x, y)

    def inverse(self, x: Element) -> Element:
        self.check(x)
        return self._inverse(x)

    def repeat(self, p: int, x: Element) -> Element:
        """Sum of ``p`` copies of ``x``; ``repeat(0, x)`` is the identity."""
        if not _is_int(p) or p < 0:
            raise PreconditionError(f"repetition count must be a nonnegative int, got {p!r}")
        self.check(x)
        result, base = self.identity, x
        while p:
            if p & 1:
                result = self._combine(result, base)
            base = self._combine(base, base)
            p >>= 1
        return result

    def format(self, x: Element) -> str:
        return str(self.encode(x))

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(self.descriptor()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()!r})"


class IntVecGroup(GroupContext):
    kind = "intvec"

    def __init__(self, dim: int):
        if not _is_int(dim) or dim < 1:
            raise ValidationError(f"dimension must be a positive int, got {dim!r}")
        self.dim = dim
        self._zero = (0,) * dim

    @property
    def identity(self):
        return self._zero

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.dim and all(_is_int(c) for c in x)

    def _combine(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _inverse(self, x):
        return tuple(-a for a in x)

    def repeat(self, p, x):
        if not _is_int(p) or p < 0:
            raise PreconditionError(f"repetition count must be a nonnegative int, got {p!r}")
        self.check(x)
        return tuple(p * a for a in x)

    def descriptor(self):
        return {"kind": self.kind, "dim": self.dim}

    def decode(self, raw):
        if not isinstance(raw, list) or len(raw) != self.dim or not all(_is_int(c) for c in raw):
            raise ValidationError(f"expected a list of {self.dim} ints, got {raw!r}")
        return tuple(raw)

    def format(self, x):
        return "(" + ",".join(str(c) for c in x) + ")"


class SymmetricGroup(GroupContext):
    """Permutations of ``1..n`` in one-line notation.

    ``combine(x, y)`` applies ``x`` first and then ``y``.
    """

    kind = "perm"

    def __init__(self, n: int):
        if not _is_int(n) or n < 1:
            raise ValidationError(f"degree must be a positive int, got {n!r}")
        self.n = n
        self._id = tuple(range(1, n + 1))

    @property
    def identity(self):
        return self._id

    @property
    def order(self):
        out = 1
        for k in range(2, self.n + 1):
            out *= k
        return out

    def elements(self):
        return iter(sorted(itertools.permutations(range(1, self.n + 1))))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == self.n
            and all(_is_int(c) for c in x)
            and sorted(x) == list(self._id)
        )

    def _combine(self, x, y):
        return tuple(y[x[i] - 1] for i in range(self.n))

    def _inverse(self, x):
        out = [0] * self.n
        for i, img in enumerate(x, start=1):
            out[img - 1] = i
        return tuple(out)

    def descriptor(self):
        return {"kind": self.kind, "n": self.n}

    def decode(self, raw):
        if not isinstance(raw, list) or len(raw) != self.n or not all(_is_int(c) for c in raw):
            raise ValidationError(f"expected an image array of length {self.n}, got {raw!r}")
        if sorted(raw) != list(self._id):
            raise ValidationError(f"image array {raw!r} is not a bijection of 1..{self.n}")
        return tuple(raw)

    def format(self, x):
        return cycle_notation(x)


def cycle_notation(perm: Sequence[int]) -> str:
    """Render a one-line permutation in cycle notation, e.g. ``(13)``."""
    seen: set[int] = set()
    cycles = []
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start - 1]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt - 1]
        if len(cyc) > 1:
            cycles.append(cyc)
    if not cycles:
        return "id"
    sep = "," if len(perm) > 9 else ""
    return "".join("(" + sep.join(str(c) for c in cyc) + ")" for cyc in cycles)


class CyclicGroup(GroupContext):
    kind = "cyclic"

    def __init__(self, n: int):
        if not _is_int(n) or n < 1:
            raise ValidationError(f"modulus must be a positive int, got {n!r}")
        self.n = n

    @property
    def identity(self):
        return 0

    @property
    def order(self):
        return self.n

    def elements(self):
        return iter(range(self.n))

    def contains(self, x):
        return _is_int(x) and 0 <= x < self.n

    def _combine(self, x, y):
        return (x + y) % self.n

    def _inverse(self, x):
        return (-x) % self.n

    def repeat(self, p, x):
        if not _is_int(p) or p < 0:
            raise PreconditionError(f"repetition count must be a nonnegative int, got {p!r}")
        self.check(x)
        return (p * x) % self.n

    def descriptor(self):
        return {"kind": self.kind, "n": self.n}

    def decode(self, raw):
        if not _is_int(raw) or not 0 <= raw < self.n:
            raise ValidationError(f"residue {raw!r} not in [0, {self.n})")
        return raw

    def format(self, x):
        return f"[{x}]"


class FinSetGroup(GroupContext):
    """Finite subsets of the naturals under symmetric difference."""

    kind = "finset"

    @property
    def identity(self):
        return ()

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and all(_is_int(c) and c >= 0 for c in x)
            and all(a < b for a, b in zip(x, x[1:]))
        )

    def _combine(self, x, y):
        return tuple(sorted(set(x).symmetric_difference(y)))

    def _inverse(self, x):
        return x

    def repeat(self, p, x):
        if not _is_int(p) or p < 0:
            raise PreconditionError(f"repetition count must be a nonnegative int, got {p!r}")
        self.check(x)
        return x if p % 2 else ()

    def descriptor(self):
        return {"kind": self.kind}

    def decode(self, raw):
        if not isinstance(raw, list) or not all(_is_int(c) and c >= 0 for c in raw):
            raise ValidationError(f"expected a list of naturals, got {raw!r}")
        if any(a >= b for a, b in zip(raw, raw[1:])):
            raise ValidationError(f"set {raw!r} must be strictly increasing")
        return tuple(raw)

    def format(self, x):
        return "{" + ",".join(str(c) for c in x) + "}"


class CayleyGroup(GroupContext):
    """A finite group given by its full Cayley table.

    ``table[i][j]`` is the index of ``i + j``. The table is validated
    exhaustively (closure, identity, inverses, associativity) on construction.
    """

    kind = "table"

    def __init__(self, table: Sequence[Sequence[int]]):
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ValidationError("Cayley table must be a nonempty square array")
        rows = tuple(tuple(row) for row in table)
        for row in rows:
            for v in row:
                if not _is_int(v) or not 0 <= v < n:
                    raise ValidationError(f"table entry {v!r} out of range [0, {n})")
        ids = [e for e in range(n) if all(rows[e][x] == x and rows[x][e] == x for x in range(n))]
        if not ids:
            raise ValidationError("Cayley table has no two-sided identity")
        e = ids[0]
        inv = []
        for x in range(n):
            cands = [y for y in range(n) if rows[x][y] == e and rows[y][x] == e]
            if not cands:
                raise ValidationError(f"element {x} has no two-sided inverse")
            inv.append(cands[0])
        for x, y, z in itertools.product(range(n), repeat=3):
            if rows[rows[x][y]][z] != rows[x][rows[y][z]]:
                raise ValidationError(f"associativity fails at ({x}, {y}, {z})")
        self.table = rows
        self._id = e
        self._inv = tuple(inv)

    @classmethod
    def cyclic(cls, n: int) -> "CayleyGroup":
        return cls([[(i + j) % n for j in range(n)] for i in range(n)])

    @property
    def identity(self):
        return self._id

    @property
    def order(self):
        return len(self.table)

    def elements(self):
        return iter(range(len(self.table)))

    def contains(self, x):
        return _is_int(x) and 0 <= x < len(self.table)

    def _combine(self, x, y):
        return self.table[x][y]

    def _inverse(self, x):
        return self._inv[x]

    def descriptor(self):
        return {"kind": self.kind, "table": [list(r) for r in self.table]}

    def decode(self, raw):
        if not self.contains(raw):
            raise ValidationError(f"table index {raw!r} not in [0, {len(self.table)})")
        return raw

    def format(self, x):
        return f"#{x}"


def group_from_descriptor(desc: Any) -> GroupContext:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ValidationError(f"group descriptor must be an object with 'kind', got {desc!r}")
    kind = desc["kind"]
    if kind == "intvec":
        return IntVecGroup(desc.get("dim"))
    if kind == "perm":
        return SymmetricGroup(desc.get("n"))
    if kind == "cyclic":
        return CyclicGroup(desc.get("n"))
    if kind == "finset":
        return FinSetGroup()
    if kind == "table":
        table = desc.get("table")
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise ValidationError("table group needs a 'table' array of arrays")
        return CayleyGroup(table)
    raise ValidationError(f"unknown group kind {kind!r}")


# Module-level spellings of the group operations.

def combine(x: Element, y: Element, g: GroupContext) -> Element:
    return g.combine(x, y)


def inverse(x: Element, g: GroupContext) -> Element:
    return g.inverse(x)


def repeat(p: int, x: Element, g: GroupContext) -> Element:
    return g.repeat(p, x)


def minkowski_sum(A: Iterable[Element], B: Iterable[Element], g: GroupContext) -> FiniteSet:
    """All pairwise compositions ``a + b``, deduplicated and sorted."""
    A, B = list(A), list(B)
    if not A or not B:
        raise EmptyOperand("Minkowski sum operands must be nonempty")
    g.check(*A)
    g.check(*B)
    return FiniteSet(g._combine(a, b) for a in A for b in B)


def minkowski_sum_many(
    A: Iterable[Element], Bs: Sequence[Iterable[Element]], g: GroupContext
) -> FiniteSet:
    """Left fold ``((A + B1) + B2) + ...``."""
    acc = FiniteSet(A)
    if not acc:
        raise EmptyOperand("Minkowski sum operands must be nonempty")
    for B in Bs:
        acc = minkowski_sum(acc, B, g)
    return acc
