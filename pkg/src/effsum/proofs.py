"""Mechanized inconsistency proofs for the equation and comparison systems.

A system lists facts about indexed points ``a¹ … aⁿ`` and shift elements
``b¹ … bᵐ`` that are each incomparable with the identity. Every system kind
handled here is inconsistent under the right relation properties, and the
``derive_*`` functions produce the step-by-step derivation of a
contradiction. ``replay`` re-checks such a derivation.

Rows have the uniform shape ``a^left X (a^right + b^letter)``:

* equations ``a^i = a^j + b^l`` use ``X = "="``;
* dominator comparisons ``a^i P a^j`` have no letter;
* shifted comparisons ``a^i P (a^j + b^l)`` use ``X = "P"``.

Terms keep the order of the b-letters they accumulate, so derivations stay
valid in non-abelian groups.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Sequence

from .errors import IndexOutOfRange, MalformedSystem
from .groups import GroupContext, group_from_descriptor
from .relations import RelationOracle, relation_from_descriptor

SYSTEM_KINDS = ("S0", "S1", "S2", "S3", "S4", "S5", "MIXED")
_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sup(i: int) -> str:
    return str(i).translate(_SUPERSCRIPT)


# ---------------------------------------------------------------------------
# index maps and cycles


@dataclass(frozen=True)
class IndexMap:
    """A total map ``{1..n} -> {1..n}`` given by its image list."""

    n: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if self.n < 1 or len(self.images) != self.n:
            raise MalformedSystem(f"index map needs {self.n} images, got {len(self.images)}")
        for v in self.images:
            if not isinstance(v, int) or not 1 <= v <= self.n:
                raise MalformedSystem(f"index map image {v!r} outside 1..{self.n}")

    def __call__(self, i: int) -> int:
        return self.images[i - 1]


@dataclass(frozen=True)
class CycleWitness:
    """Indices ``l₁ … l_r`` with ``f(l_t) = l_{t+1}`` and ``f(l_r) = l₁``."""

    indices: tuple
    multiplicities: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.indices)

    def is_cycle_of(self, f: Callable[[int], int]) -> bool:
        idx = self.indices
        return bool(idx) and all(f(idx[t]) == idx[(t + 1) % len(idx)] for t in range(len(idx)))


def find_index_cycle(imap: IndexMap, start: int) -> CycleWitness:
    """Iterate ``start, f(start), …`` and return the first repeated segment."""
    if not 1 <= start <= imap.n:
        raise IndexOutOfRange(f"start index {start} outside 1..{imap.n}")
    position: dict[int, int] = {}
    path: list[int] = []
    x = start
    while x not in position:
        position[x] = len(path)
        path.append(x)
        x = imap(x)
    return CycleWitness(tuple(path[position[x]:]))


# ---------------------------------------------------------------------------
# terms and facts


@dataclass(frozen=True)
class Term:
    """``a^base + b^{w₁} + b^{w₂} + …``; ``base=None`` stands for ``0_G``."""

    base: int | None = None
    word: tuple = ()

    def plus(self, word: Sequence[int]) -> "Term":
        return Term(self.base, self.word + tuple(word))

    def runs(self) -> list[tuple[int, int]]:
        return [(letter, len(list(grp))) for letter, grp in itertools.groupby(self.word)]

    @property
    def atomic(self) -> bool:
        if self.base is None:
            return len(self.word) <= 1
        return not self.word

    def render(self, multi: bool) -> str:
        parts = [] if self.base is None else [f"a{_sup(self.base)}"]
        for letter, count in self.runs():
            name = f"b{_sup(letter)}" if multi else "b"
            parts.append(name if count == 1 else f"{count}{name}")
        return "+".join(parts) if parts else "0_G"


ZERO = Term()

RELATIONS = ("P", "R", "=", "I")


@dataclass(frozen=True)
class Fact:
    left: Term
    rel: str
    right: Term

    def render(self, multi: bool) -> str:
        if self.rel == "=":
            return f"{self.left.render(multi)} = {self.right.render(multi)}"
        return f"{_wrap(self.left, multi)}{self.rel}{_wrap(self.right, multi)}"

    def flipped(self) -> "Fact":
        return Fact(self.right, self.rel, self.left)


def _wrap(t: Term, multi: bool) -> str:
    s = t.render(multi)
    return s if t.atomic else f"({s})"


def _chain_rel(x: str, y: str) -> str:
    if "P" in (x, y):
        return "P"
    if "R" in (x, y):
        return "R"
    return "="


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class Row:
    """``a^left rel (a^right + b^letter)``; ``letter=None`` drops the shift."""

    left: int
    right: int
    letter: int | None = 1
    rel: str = "="
    assumed: bool = False

    def fact(self) -> Fact:
        shift = () if self.letter is None else (self.letter,)
        return Fact(Term(self.left), self.rel, Term(self.right, shift))

    def to_dict(self) -> dict:
        d = {"left": self.left, "right": self.right}
        if self.letter is not None:
            d["b"] = self.letter
        d["rel"] = self.rel
        if self.assumed:
            d["assumed"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict, default_rel: str) -> "Row":
        try:
            return cls(int(d["left"]), int(d["right"]), d.get("b"), d.get("rel", default_rel),
                       bool(d.get("assumed", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSystem(f"bad system row {d!r}: {exc}") from None


def incomparability(letter: int) -> Fact:
    return Fact(Term(None, (letter,)), "I", ZERO)


@dataclass(frozen=True)
class SystemInstance:
    """One of the systems S0–S5 or a mixed comparison/equality system.

    Optional concrete data (``group``, ``elements``, ``bs`` and ``relation``)
    lets every non-assumed row be checked by arithmetic. Rows flagged
    ``assumed`` are the premises of a proof by contradiction and need not
    hold concretely.
    """

    kind: str
    n: int
    rows: tuple
    m: int = 1
    k: int | None = None
    group: GroupContext | None = None
    elements: tuple | None = None
    bs: tuple | None = None
    relation: RelationOracle | None = None
    notes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.elements is not None:
            object.__setattr__(self, "elements", tuple(self.elements))
        if self.bs is not None:
            object.__setattr__(self, "bs", tuple(self.bs))
        _validate(self)

    # -- constructors ---------------------------------------------------

    @classmethod
    def equations(cls, targets: Sequence[int], letters: Sequence[int] | None = None, **kw):
        """S0 (one b) or S3 (several): ``a^i = a^{targets[i]} + b^{letters[i]}``."""
        n = len(targets)
        letters = list(letters) if letters is not None else [1] * n
        m = kw.pop("m", max(letters, default=1))
        kind = kw.pop("kind", "S0" if m == 1 else "S3")
        rows = [Row(i + 1, t, l, "=") for i, (t, l) in enumerate(zip(targets, letters))]
        return cls(kind, n, rows, m=m, **kw)

    @classmethod
    def split(cls, k: int, targets: Sequence[int], dominators: Sequence[int],
              letters: Sequence[int] | None = None, **kw):
        """S1 or S2: ``k`` equations followed by ``a^{dominators[j]} P a^{k+1+j}``."""
        n = k + len(dominators)
        letters = list(letters) if letters is not None else [1] * k
        m = kw.pop("m", max(letters, default=1))
        kind = kw.pop("kind", "S1" if m == 1 else "S2")
        rows = [Row(i + 1, t, l, "=") for i, (t, l) in enumerate(zip(targets, letters))]
        rows += [Row(i, k + 1 + j, None, "P") for j, i in enumerate(dominators)]
        return cls(kind, n, rows, m=m, k=k, **kw)

    @classmethod
    def shifted(cls, n: int, left: dict, rels: dict | None = None, m: int = 1, **kw):
        """S4, S5 or MIXED: ``a^{left[j,l]} X (a^j + b^l)`` for every pair."""
        rels = rels or {}
        rows = [Row(left[(j, l)], j, l, rels.get((j, l), "P"))
                for j in range(1, n + 1) for l in range(1, m + 1)]
        default = "S4" if m == 1 else "S5"
        kind = kw.pop("kind", "MIXED" if any(r.rel == "=" for r in rows) else default)
        return cls(kind, n, rows, m=m, **kw)

    # -- views -----------------------------------------------------------

    @property
    def multi(self) -> bool:
        return self.m > 1

    @property
    def concrete(self) -> bool:
        return self.group is not None and self.elements is not None and self.bs is not None

    def equation_rows(self) -> list[Row]:
        return [r for r in self.rows if r.rel == "=" and self.kind in ("S0", "S1", "S2", "S3")]

    def comparison_rows(self) -> list[Row]:
        return [r for r in self.rows if r.letter is None]

    def hypotheses(self) -> list[tuple[Fact, bool]]:
        facts = [(r.fact(), r.assumed) for r in self.rows]
        facts += [(incomparability(l), False) for l in range(1, self.m + 1)]
        return facts

    def value(self, term: Term) -> Any:
        g = self.group
        acc = g.identity if term.base is None else self.elements[term.base - 1]
        for letter in term.word:
            acc = g.combine(acc, self.bs[letter - 1])
        return acc

    def holds(self, fact: Fact) -> bool | None:
        """Concrete truth of ``fact``, or ``None`` when it cannot be evaluated."""
        if not self.concrete:
            return None
        x, y = self.value(fact.left), self.value(fact.right)
        if fact.rel == "=":
            return x == y
        rel = self.relation
        if rel is None:
            return None
        if fact.rel == "P":
            return rel.strictly(x, y)
        if fact.rel == "R":
            return rel.related(x, y)
        return rel.incomparable(x, y)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind, "n": self.n, "m": self.m}
        if self.k is not None:
            d["k"] = self.k
        d["rows"] = [r.to_dict() for r in self.rows]
        if self.group is not None:
            d["group"] = self.group.descriptor()
        if self.relation is not None:
            d["relation"] = self.relation.descriptor()
        if self.elements is not None:
            d["elements"] = [self.group.encode(x) for x in self.elements]
        if self.bs is not None:
            d["bs"] = [self.group.encode(x) for x in self.bs]
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SystemInstance":
        if not isinstance(d, dict):
            raise MalformedSystem("system must be a JSON object")
        try:
            kind, n = d["kind"], int(d["n"])
        except (KeyError, TypeError, ValueError):
            raise MalformedSystem("system needs 'kind' and integer 'n'") from None
        rows_raw = d.get("rows")
        if not isinstance(rows_raw, list):
            raise MalformedSystem("system needs a 'rows' array")
        rows = [Row.from_dict(r, "=") for r in rows_raw]
        g = group_from_descriptor(d["group"]) if "group" in d else None
        rel = relation_from_descriptor(d["relation"], g) if "relation" in d and g else None
        elements = [g.decode(x) for x in d["elements"]] if g and "elements" in d else None
        bs = [g.decode(x) for x in d["bs"]] if g and "bs" in d else None
        return cls(kind, n, rows, m=int(d.get("m", 1)), k=d.get("k"), group=g,
                   elements=elements, bs=bs, relation=rel, notes=tuple(d.get("notes", ())))


def _validate(sys: SystemInstance) -> None:
    kind, n, m, k = sys.kind, sys.n, sys.m, sys.k
    if kind not in SYSTEM_KINDS:
        raise MalformedSystem(f"unknown system kind {kind!r}")
    if not isinstance(n, int) or n < 1:
        raise MalformedSystem(f"n must be a positive integer, got {n!r}")
    if not isinstance(m, int) or m < 1:
        raise MalformedSystem(f"m must be a positive integer, got {m!r}")
    if kind in ("S0", "S1", "S4") and m != 1:
        raise MalformedSystem(f"{kind} has a single b, got m={m}")
    for r in sys.rows:
        if r.rel not in ("P", "="):
            raise MalformedSystem(f"row relation must be P or =, got {r.rel!r}")
        for idx in (r.left, r.right):
            if not isinstance(idx, int) or not 1 <= idx <= n:
                raise MalformedSystem(f"row index {idx!r} outside 1..{n}")
        if r.letter is not None and (not isinstance(r.letter, int) or not 1 <= r.letter <= m):
            raise MalformedSystem(f"b-selector {r.letter!r} outside 1..{m}")

    if kind in ("S0", "S3"):
        if sorted(r.left for r in sys.rows) != list(range(1, n + 1)):
            raise MalformedSystem(f"{kind} needs exactly one equation per index 1..{n}")
        if any(r.rel != "=" or r.letter is None for r in sys.rows):
            raise MalformedSystem(f"{kind} rows must be equations a^i = a^j + b")
    elif kind in ("S1", "S2"):
        if k is None or not isinstance(k, int) or not 1 <= k <= n - 1:
            raise MalformedSystem(f"{kind} needs 1 <= k <= n-1, got k={k!r}, n={n}")
        eqs = [r for r in sys.rows if r.rel == "="]
        comps = [r for r in sys.rows if r.rel == "P"]
        if sorted(r.left for r in eqs) != list(range(1, k + 1)) or any(r.letter is None for r in eqs):
            raise MalformedSystem(f"{kind} needs one equation a^i = a^j + b for each i in 1..{k}")
        if sorted(r.right for r in comps) != list(range(k + 1, n + 1)):
            raise MalformedSystem(f"{kind} needs one comparison for each index {k + 1}..{n}")
        for r in comps:
            if r.letter is not None or not 1 <= r.left <= k:
                raise MalformedSystem(f"{kind} comparison left indices must lie in 1..{k}")
    else:
        pairs = sorted((r.right, r.letter) for r in sys.rows)
        want = [(j, l) for j in range(1, n + 1) for l in range(1, m + 1)]
        if pairs != want:
            raise MalformedSystem(f"{kind} needs one row for every (j, l) in 1..{n} x 1..{m}")
        for r in sys.rows:
            if r.left == r.right and kind != "MIXED":
                raise MalformedSystem(f"{kind} row for ({r.right}, {r.letter}) has left index equal to right")
            if kind != "MIXED" and r.rel != "P":
                raise MalformedSystem(f"{kind} rows must be strict comparisons")

    if sys.elements is not None or sys.bs is not None:
        g = sys.group
        if g is None or sys.elements is None or sys.bs is None:
            raise MalformedSystem("concrete systems need group, elements and bs together")
        if len(sys.elements) != n or len(sys.bs) != m:
            raise MalformedSystem(f"expected {n} elements and {m} bs")
        g.check(*sys.elements, *sys.bs)
        for fact, assumed in sys.hypotheses():
            if not assumed and sys.holds(fact) is False:
                raise MalformedSystem(
                    f"hypothesis {fact.render(sys.multi)} is false for the given elements; mark it assumed"
                )


def project_s5(sys: SystemInstance, l: int) -> SystemInstance:
    """The S4 subsystem of rows that shift by ``b^l``."""
    if sys.kind != "S5":
        raise MalformedSystem(f"project_s5 needs an S5 system, got {sys.kind}")
    if not isinstance(l, int) or not 1 <= l <= sys.m:
        raise IndexOutOfRange(f"b-index {l!r} outside 1..{sys.m}")
    rows = sorted((replace(r, letter=1) for r in sys.rows if r.letter == l), key=lambda r: r.right)
    bs = (sys.bs[l - 1],) if sys.bs is not None else None
    return SystemInstance("S4", sys.n, rows, m=1, group=sys.group, elements=sys.elements,
                          bs=bs, relation=sys.relation)


# ---------------------------------------------------------------------------
# derivation traces


@dataclass(frozen=True)
class Step:
    rule: str
    facts: tuple = ()
    premises: tuple = ()
    text: str = ""

    def statement(self, multi: bool) -> str:
        if self.text:
            return self.text
        return " ∨ ".join(f.render(multi) for f in self.facts)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"rule": self.rule}
        if self.facts:
            d["facts"] = [_fact_to_json(f) for f in self.facts]
        if self.premises:
            d["premises"] = list(self.premises)
        if self.text:
            d["text"] = self.text
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Step":
        return cls(d["rule"], tuple(_fact_from_json(f) for f in d.get("facts", ())),
                   tuple(d.get("premises", ())), d.get("text", ""))


def _term_to_json(t: Term) -> list:
    return [t.base, list(t.word)]


def _term_from_json(v) -> Term:
    return Term(v[0], tuple(v[1]))


def _fact_to_json(f: Fact) -> list:
    return [_term_to_json(f.left), f.rel, _term_to_json(f.right)]


def _fact_from_json(v) -> Fact:
    return Fact(_term_from_json(v[0]), v[1], _term_from_json(v[2]))


@dataclass(frozen=True)
class DerivationTrace:
    system: SystemInstance
    steps: tuple
    cycle: CycleWitness | None = None

    @property
    def conclusion(self) -> str:
        return self.steps[-1].statement(self.system.multi) if self.steps else ""

    def lines(self) -> list[str]:
        return [f"{s.rule} | {s.statement(self.system.multi)}" for s in self.steps]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self) -> dict:
        d = {"system": self.system.to_dict(), "steps": [s.to_dict() for s in self.steps]}
        if self.cycle is not None:
            d["cycle"] = list(self.cycle.indices)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DerivationTrace":
        cyc = CycleWitness(tuple(d["cycle"])) if "cycle" in d else None
        return cls(SystemInstance.from_dict(d["system"]),
                   tuple(Step.from_dict(s) for s in d["steps"]), cyc)


class _Builder:
    def __init__(self, sys: SystemInstance):
        self.sys = sys
        self.steps: list[Step] = []
        self._hyp: dict[Fact, int] = {}
        for text in sys.notes:
            self.note(text)
        if sys.concrete:
            g = sys.group
            names = [f"a{_sup(i)} = {g.format(x)}" for i, x in enumerate(sys.elements, start=1)]
            names += [f"{'b' + _sup(l) if sys.multi else 'b'} = {g.format(x)}"
                      for l, x in enumerate(sys.bs, start=1)]
            self.note("; ".join(names))

    def add(self, rule: str, facts, premises=(), text: str = "") -> int:
        if isinstance(facts, Fact):
            facts = (facts,)
        self.steps.append(Step(rule, tuple(facts), tuple(premises), text))
        return len(self.steps) - 1

    def note(self, text: str) -> None:
        self.add("NOTE", (), (), text)

    def hypotheses(self, rows: Iterable[Row], letters: Iterable[int]) -> None:
        for r in rows:
            self.hyp(r.fact(), r.assumed)
        for l in letters:
            self.hyp(incomparability(l), False)

    def hyp(self, fact: Fact, assumed: bool) -> int:
        if fact not in self._hyp:
            self._hyp[fact] = self.add("ASSUME" if assumed else "HYP", fact)
        return self._hyp[fact]

    def fact(self, i: int) -> Fact:
        return self.steps[i].facts[0]

    def finish(self, chain: Sequence[int], conclusion: int, cycle=None) -> DerivationTrace:
        multi = self.sys.multi
        letters = [_single_letter(f) for f in self.steps[conclusion].facts]
        refs = [self._hyp[incomparability(l)] for l in letters]
        self.add("CONTRADICTION", (), (*chain, conclusion, *refs),
                 _contradiction_text(self.steps, chain, conclusion, refs, multi))
        return DerivationTrace(self.sys, tuple(self.steps), cycle)


def _single_letter(f: Fact) -> int:
    side = f.left if f.left.word else f.right
    return side.word[0]


def _contradiction_text(steps, chain, conclusion, refs, multi) -> str:
    shown: list[str] = []
    for i in (*chain, conclusion):
        s = steps[i].statement(multi)
        if not shown or shown[-1] != s:
            shown.append(s)
    against = " and ".join(steps[i].statement(multi) for i in refs)
    return " ⇒ ".join(shown) + f", contradicting {against}"


def _letters_in(word: Sequence[int]) -> list[int]:
    return list(dict.fromkeys(word))


def _equation_cycle_steps(b: _Builder, cycle: CycleWitness, rows_by_left: dict) -> tuple[list[int], int]:
    """Compose the cycle's equations into ``a^u = a^u + w``, then ``w = 0_G``."""
    idx = cycle.indices
    cur = b._hyp[rows_by_left[idx[0]].fact()]
    for t in range(1, len(idx)):
        row = rows_by_left[idx[t]]
        prev = b.fact(cur)
        new = Fact(prev.left, "=", Term(row.right, (row.letter,) + prev.right.word))
        cur = b.add("GROUP", new, (cur, b._hyp[row.fact()]))
    word = b.fact(cur).right.word
    cancelled = b.add("GROUP", Fact(Term(None, word), "=", ZERO), (cur,))
    concl = b.add("P4", tuple(Fact(Term(None, (l,)), "R", ZERO) for l in _letters_in(word)),
                  (cancelled,))
    return [cur, cancelled], concl


def derive_equation_cycle(sys: SystemInstance, g: GroupContext | None = None) -> DerivationTrace:
    """Contradiction for S0/S3: a cycle of equations sums some b's to ``0_G``."""
    if sys.kind not in ("S0", "S3"):
        raise MalformedSystem(f"derive_equation_cycle needs S0 or S3, got {sys.kind}")
    by_left = {r.left: r for r in sys.rows}
    imap = IndexMap(sys.n, [by_left[i].right for i in range(1, sys.n + 1)])
    cyc = find_index_cycle(imap, 1)
    word = [by_left[i].letter for i in cyc.indices]
    cyc = CycleWitness(cyc.indices, dict(Counter(word)))
    b = _Builder(sys)
    b.hypotheses(sys.rows, range(1, sys.m + 1))
    b.note(f"cycle {list(cyc.indices)} of the equation index map, length {cyc.length}")
    chain, concl = _equation_cycle_steps(b, cyc, by_left)
    return b.finish(chain, concl, cyc)


@dataclass(frozen=True)
class Representation:
    """``a^index = a^target + word`` with ``target > k``."""

    index: int
    target: int
    word: tuple
    path: tuple = ()

    @property
    def multiplicities(self) -> dict:
        return dict(Counter(self.word))


def eliminate_representations(sys: SystemInstance, g: GroupContext | None = None):
    """Express every ``a^i`` (``i ≤ k``) through ``a^{k+1} … aⁿ``.

    Returns a list of ``Representation`` or, when the equations loop among
    the first ``k`` indices, a ``CycleWitness`` for that loop.
    """
    if sys.kind not in ("S1", "S2"):
        raise MalformedSystem(f"eliminate_representations needs S1 or S2, got {sys.kind}")
    k = sys.k
    eq = {r.left: r for r in sys.rows if r.rel == "="}
    reps = []
    for i in range(1, k + 1):
        path: list[int] = []
        cur, word = i, ()
        while cur <= k:
            if cur in path:
                seg = path[path.index(cur):]
                letters = [eq[x].letter for x in seg]
                return CycleWitness(tuple(seg), dict(Counter(letters)))
            path.append(cur)
            word = (eq[cur].letter,) + word
            cur = eq[cur].right
        rep = Representation(i, cur, word, tuple(path))
        if sys.concrete and not any(eq[x].assumed for x in path):
            if sys.value(Term(i)) != sys.value(Term(cur, word)):
                raise MalformedSystem(f"representation of a{_sup(i)} fails group arithmetic")
        reps.append(rep)
    return reps


def derive_dominator_cycle(sys: SystemInstance, g: GroupContext | None = None) -> DerivationTrace:
    """Contradiction for S1/S2 via a cycle among the dominated indices."""
    res = eliminate_representations(sys)
    eq = {r.left: r for r in sys.rows if r.rel == "="}
    b = _Builder(sys)
    b.hypotheses(sys.rows, range(1, sys.m + 1))
    if isinstance(res, CycleWitness):
        b.note(f"equations cycle on {list(res.indices)}; no elimination possible")
        chain, concl = _equation_cycle_steps(b, res, eq)
        return b.finish(chain, concl, res)

    k, n = sys.k, sys.n
    reps = {r.index: r for r in res}
    derived: dict[int, int] = {}
    for rep in res:
        if len(rep.path) > 1:
            first = b._hyp[eq[rep.index].fact()]
            cites = [b._hyp[eq[x].fact()] for x in rep.path[1:]]
            derived[rep.index] = b.add("GROUP", Fact(Term(rep.index), "=", Term(rep.target, rep.word)),
                                       (first, *cites))
        else:
            derived[rep.index] = b._hyp[eq[rep.index].fact()]

    rewritten: dict[int, int] = {}
    target: dict[int, int] = {}
    for row in sorted(sys.comparison_rows(), key=lambda r: r.right):
        rep = reps[row.left]
        fact = Fact(Term(rep.target, rep.word), "P", Term(row.right))
        rewritten[row.right] = b.add("GROUP", fact, (b._hyp[row.fact()], derived[row.left]))
        target[row.right] = rep.target

    imap = IndexMap(n - k, [target[j] - k for j in range(k + 1, n + 1)])
    local = find_index_cycle(imap, 1)
    idx = tuple(i + k for i in local.indices)
    b.note(f"f(j) = m_j on {k + 1}..{n} is {[target[j] for j in range(k + 1, n + 1)]}; "
           f"cycle {list(idx)} from index {k + 1}")

    cur = rewritten[idx[0]]
    for t in range(1, len(idx)):
        acc = b.fact(cur).left.word
        c = b.fact(rewritten[idx[t]])
        shifted = b.add("P3", Fact(c.left.plus(acc), "P", c.right.plus(acc)), (rewritten[idx[t]],))
        cur = b.add("P1", Fact(b.fact(shifted).left, "P", b.fact(cur).right), (shifted, cur))
    word = b.fact(cur).left.word
    stripped = b.add("P3", Fact(Term(None, word), "P", ZERO), (cur,))
    concl = b.add("P4", tuple(Fact(Term(None, (l,)), "P", ZERO) for l in _letters_in(word)),
                  (stripped,))
    cyc = CycleWitness(idx, dict(Counter(word)))
    return b.finish([cur, stripped], concl, cyc)


def derive_dominated_cycle(sys: SystemInstance, g: GroupContext | None = None, letter: int = 1) -> DerivationTrace:
    """Contradiction for S4/S5/MIXED via a cycle of left indices.

    Systems with several b's are first restricted to the rows shifting by
    ``b^letter``.
    """
    if sys.kind not in ("S4", "S5", "MIXED"):
        raise MalformedSystem(f"derive_dominated_cycle needs S4, S5 or MIXED, got {sys.kind}")
    if sys.kind == "S5":
        project_s5(sys, letter)
    elif not 1 <= letter <= sys.m:
        raise IndexOutOfRange(f"b-index {letter!r} outside 1..{sys.m}")
    rows = {r.right: r for r in sys.rows if r.letter == letter}
    b = _Builder(sys)
    b.hypotheses(sys.rows, range(1, sys.m + 1))
    if sys.kind == "MIXED":
        strict = sorted((r.right, r.letter) for r in sys.rows if r.rel == "P")
        b.note("J = {" + ", ".join(f"({j},{l})" for j, l in strict) + "} (shifted points outside A)")
    if sys.m > 1:
        b.note(f"restricting to the rows that shift by b{_sup(letter)}")
    imap = IndexMap(sys.n, [rows[j].left for j in range(1, sys.n + 1)])
    cyc = find_index_cycle(imap, 1)
    idx = cyc.indices
    b.note(f"left-index map {list(imap.images)}; cycle {list(idx)} from index 1")

    r = len(idx)
    cur = b._hyp[rows[idx[r - 1]].fact()]
    for t in range(r - 2, -1, -1):
        row = rows[idx[t]]
        c = row.fact()
        prev = b.fact(cur)
        acc = prev.right.word
        rule = "GROUP" if c.rel == "=" else "P3"
        shifted = b.add(rule, Fact(c.left.plus(acc), c.rel, c.right.plus(acc)), (b._hyp[c],))
        rel = _chain_rel(prev.rel, c.rel)
        s = b.fact(shifted)
        cur = b.add("GROUP" if rel == "=" else "P1", Fact(prev.left, rel, s.right), (cur, shifted))
    final = b.fact(cur)
    word = final.right.word
    stripped = b.add("GROUP" if final.rel == "=" else "P3", Fact(ZERO, final.rel, Term(None, word)), (cur,))
    out = "R" if final.rel == "=" else final.rel
    concl = b.add("P5", tuple(Fact(ZERO, out, Term(None, (l,))) for l in _letters_in(word)), (stripped,))
    witness = CycleWitness(idx, dict(Counter(word)))
    return b.finish([cur, stripped], concl, witness)


def derive(sys: SystemInstance) -> DerivationTrace:
    """Dispatch to the derivation matching the system kind."""
    if sys.kind in ("S0", "S3"):
        return derive_equation_cycle(sys)
    if sys.kind in ("S1", "S2"):
        return derive_dominator_cycle(sys)
    return derive_dominated_cycle(sys)


# ---------------------------------------------------------------------------
# replay


@dataclass(frozen=True)
class ReplayReport:
    ok: bool
    failures: tuple = ()


def _expansions(term: Term, eqs: Sequence[Fact], depth: int) -> set[Term]:
    """Terms reachable by rewriting the base with the cited equations."""
    seen = {term}
    frontier = [term]
    for _ in range(depth):
        nxt = []
        for t in frontier:
            for e in eqs:
                if t.base is not None and e.left == Term(t.base):
                    u = Term(e.right.base, e.right.word + t.word)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
        frontier = nxt
    return seen


def _right_added(p: Fact, f: Fact) -> bool:
    n = len(p.left.word)
    m = len(p.right.word)
    if f.rel != p.rel or f.left.base != p.left.base or f.right.base != p.right.base:
        return False
    if f.left.word[:n] != p.left.word or f.right.word[:m] != p.right.word:
        return False
    return f.left.word[n:] == f.right.word[m:] and len(f.left.word) > n


def _stripped(p: Fact, f: Fact) -> bool:
    if p.left.base is None or p.left.base != p.right.base:
        return False
    return f == Fact(Term(None, p.left.word), p.rel, Term(None, p.right.word))


def _check_group(f: Fact, prem: list[Fact]) -> bool:
    p = prem[0]
    if len(prem) == 1:
        if p.rel != "=" or f.rel != "=":
            return False
        if _right_added(p, f):
            return True
        return _stripped(p, f) or _stripped(p, f.flipped())
    eqs = prem[1:]
    if all(e.rel == "=" for e in prem) and len(prem) == 2 and f.rel == "=":
        if p.right == eqs[0].left and f == Fact(p.left, "=", eqs[0].right):
            return True
    if any(e.rel != "=" or e.left.word or e.left.base is None for e in eqs):
        return False
    if f.rel != p.rel:
        return False
    depth = len(eqs) + 1
    return f.left in _expansions(p.left, eqs, depth) and f.right in _expansions(p.right, eqs, depth)


def _check_repetition(rule: str, facts: tuple, p: Fact) -> bool:
    zero_left = rule == "P5"
    if p.rel == "=":
        word_side = p.right if p.left == ZERO else p.left if p.right == ZERO else None
        want_rel = "R"
    elif p.rel in ("P", "R"):
        word_side = p.right if zero_left and p.left == ZERO else p.left if not zero_left and p.right == ZERO else None
        want_rel = p.rel
    else:
        return False
    if word_side is None or word_side.base is not None or not word_side.word:
        return False
    expected = []
    for l in _letters_in(word_side.word):
        single = Term(None, (l,))
        expected.append(Fact(ZERO, want_rel, single) if zero_left else Fact(single, want_rel, ZERO))
    return tuple(expected) == tuple(facts)


def _contradicts(f: Fact, hyp: Fact) -> bool:
    l = hyp.left.word[0]
    single = Term(None, (l,))
    return {f.left, f.right} == {single, ZERO} and f.rel in ("P", "R", "=")


def replay(trace: DerivationTrace) -> ReplayReport:
    """Re-check every step of a derivation.

    Each step must follow from its cited premises by its rule, hypotheses
    must belong to the system, and with concrete data every non-assumed
    hypothesis and every equation derived only from such hypotheses must
    hold by group arithmetic.
    """
    sys = trace.system
    steps = trace.steps
    multi = sys.multi
    hyps = {}
    for fact, assumed in sys.hypotheses():
        hyps.setdefault(fact, assumed)
    failures: list[str] = []
    grounded: list[bool] = []

    def fail(i, msg):
        failures.append(f"step {i} ({steps[i].rule}): {msg}")

    for i, st in enumerate(steps):
        if any(not isinstance(p, int) or not 0 <= p < i for p in st.premises):
            fail(i, "premise does not refer to an earlier step")
            grounded.append(False)
            continue
        if any(steps[p].rule in ("NOTE", "CONTRADICTION") for p in st.premises):
            fail(i, "premise is not a fact")
        prem = [steps[p].facts[0] for p in st.premises if steps[p].facts]
        ok = True
        rule = st.rule
        if rule == "NOTE":
            ok = not st.facts and not st.premises
        elif rule in ("HYP", "ASSUME"):
            f = st.facts[0] if len(st.facts) == 1 else None
            ok = f is not None and f in hyps and hyps[f] == (rule == "ASSUME")
            if ok and rule == "HYP" and sys.holds(f) is False:
                fail(i, "hypothesis is false for the concrete elements")
        elif rule == "GROUP":
            ok = len(st.facts) == 1 and bool(prem) and _check_group(st.facts[0], prem)
        elif rule == "P3":
            ok = (len(st.facts) == 1 and len(prem) == 1 and prem[0].rel in ("P", "R")
                  and (_right_added(prem[0], st.facts[0]) or _stripped(prem[0], st.facts[0])))
        elif rule == "P1":
            ok = len(st.facts) == 1 and len(prem) == 2
            if ok:
                x, y = prem
                f = st.facts[0]
                rel = _chain_rel(x.rel, y.rel)
                ok = (rel != "=" and x.rel != "I" and y.rel != "I" and
                      ((x.right == y.left and f == Fact(x.left, rel, y.right)) or
                       (y.right == x.left and f == Fact(y.left, rel, x.right))))
        elif rule in ("P4", "P5"):
            ok = len(prem) == 1 and _check_repetition(rule, st.facts, prem[0])
        elif rule == "CONTRADICTION":
            is_ref = [bool(steps[p].facts) and steps[p].facts[0].rel == "I" for p in st.premises]
            chain = [p for p, r in zip(st.premises, is_ref) if not r]
            refs = [p for p, r in zip(st.premises, is_ref) if r]
            ok = i == len(steps) - 1 and bool(chain) and bool(refs)
            if ok:
                concl = steps[chain[-1]]
                ref_facts = [steps[p].facts[0] for p in refs]
                ok = (concl.rule in ("P4", "P5")
                      and all(steps[p].rule == "HYP" for p in refs)
                      and all(any(_contradicts(f, h) for h in ref_facts) for f in concl.facts)
                      and st.text == _contradiction_text(steps, chain[:-1], chain[-1], refs, multi))
        else:
            ok = False
        if not ok:
            fail(i, f"does not follow: {st.statement(multi)}")
        g_ok = rule == "HYP" or (rule not in ("ASSUME", "NOTE") and all(grounded[p] for p in st.premises))
        grounded.append(g_ok)
        if g_ok and rule == "GROUP" and st.facts and st.facts[0].rel == "=" and sys.holds(st.facts[0]) is False:
            fail(i, "derived equation fails group arithmetic")
    if not steps or steps[-1].rule != "CONTRADICTION":
        failures.append("trace does not end in a contradiction")
    return ReplayReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# product-order reading of a shifted comparison


@dataclass(frozen=True)
class ComponentBound:
    component: int
    bound: int

    def render(self) -> str:
        sub = str(self.component).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))
        if self.bound == -1:
            return f"b{sub} < 0"
        return f"b{sub} ≤ {self.bound}"


def component_constraints(dominator: Sequence[int], base: Sequence[int]) -> tuple[ComponentBound, ...]:
    """Bounds on an unknown integer ``b`` implied by ``dominator P (base + b)``.

    Under the componentwise order this says ``b ≤ dominator − base`` in every
    component (with at least one strict inequality, not tracked here). A
    bound of −1 is shown in its equivalent integer form ``b_c < 0``.
    """
    return tuple(ComponentBound(c + 1, d - a) for c, (d, a) in enumerate(zip(dominator, base)))


def render_constraints(bounds: Sequence[ComponentBound]) -> str:
    return " and ".join(cb.render() for cb in bounds)


def forces_comparable(rows: Sequence[Sequence[ComponentBound]]) -> bool:
    """True when every ``b`` meeting all bounds satisfies ``0 R b``."""
    if not rows:
        return False
    q = len(rows[0])
    tight = [min(r[c].bound for r in rows) for c in range(q)]
    return all(t <= 0 for t in tight)
