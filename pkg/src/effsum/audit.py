"""Bounded verification of relation properties over a probe set.

Scans run in a fixed order that only ever appends when the probe grows
(deeper closure layers, a larger cap, a larger multiplicity bound), so a
violation found once is found again under any larger configuration.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import CarrierMismatch, PreconditionError
from .groups import FiniteSet, GroupContext
from .relations import PROPERTY_IDS, ExplicitMatrix, ProductOrder, RelationOracle

log = logging.getLogger(__name__)

Element = Hashable

VIOLATED = "Violated"
NO_VIOLATION = "NoViolationFound"
PROVEN = "ProvenExhaustive"
DECLARED = "Declared"

AVAILABLE = frozenset({PROVEN, DECLARED})


@dataclass(frozen=True)
class ProbeSet:
    """Closure of ``A u B u {0} u inverses`` under composition.

    ``order`` is the scan order: the seed elements (A, then B, then the
    identity, then inverses), followed by each closure layer in generation
    order.
    """

    order: tuple
    depth: int
    truncated: bool = False

    @property
    def elements(self) -> FiniteSet:
        return FiniteSet(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, x) -> bool:
        return x in self.elements


def probe_closure(
    A: Iterable[Element], B: Iterable[Element], g: GroupContext, depth: int = 2, cap: int = 10000
) -> ProbeSet:
    A, B = FiniteSet(A), FiniteSet(B)
    if depth < 1:
        raise PreconditionError(f"probe depth must be >= 1, got {depth}")
    if cap < len(A) + len(B) + 1:
        raise PreconditionError(f"probe cap {cap} smaller than |A|+|B|+1")
    order: list = []
    seen: set = set()

    def add(x) -> bool:
        if x in seen:
            return True
        if len(order) >= cap:
            return False
        seen.add(x)
        order.append(x)
        return True

    for x in itertools.chain(A, B, [g.identity]):
        g.check(x)
        add(x)
    # seeds are validated once; the closure uses the unchecked operations
    comb, inv = g._combine, g._inverse
    for x in list(order):
        if not add(inv(x)):
            return ProbeSet(tuple(order), depth, True)
    for _ in range(depth):
        current = list(order)
        grew = False
        for x in current:
            for y in current:
                z = comb(x, y)
                if z in seen:
                    continue
                if not add(z) or not add(inv(z)):
                    return ProbeSet(tuple(order), depth, True)
                grew = True
        if not grew:
            break
    return ProbeSet(tuple(order), depth, False)


@dataclass(frozen=True)
class PropertyStatus:
    property_id: str
    outcome: str
    witness: dict | None = None
    probe_size: int = 0
    depth: int = 0
    evaluations: int = 0
    evidence: str = ""

    @property
    def available(self) -> bool:
        return self.outcome in AVAILABLE

    def to_dict(self) -> dict:
        return {
            "property": self.property_id,
            "outcome": self.outcome,
            "witness": self.witness,
            "probe_size": self.probe_size,
            "depth": self.depth,
            "evaluations": self.evaluations,
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PropertyStatus":
        return cls(
            d["property"], d["outcome"], d.get("witness"), d.get("probe_size", 0),
            d.get("depth", 0), d.get("evaluations", 0), d.get("evidence", ""),
        )


@dataclass(frozen=True)
class AuditConfig:
    """Audit bounds. ``None`` fields resolve from the instance size."""

    depth: int = 2
    cap: int = 10000
    max_multiplicity: int | None = None
    length_bound: int | None = None
    budget: int = 200_000
    spot_checks: int = 2_000
    exhaustive_limit: int = 64

    def resolve(self, n_a: int, n_b: int) -> "AuditConfig":
        return replace(
            self,
            max_multiplicity=self.max_multiplicity or max(8, n_a + n_b),
            length_bound=self.length_bound or max(1, n_b),
        )

    def to_dict(self) -> dict:
        return {
            "depth": self.depth, "cap": self.cap, "max_multiplicity": self.max_multiplicity,
            "length_bound": self.length_bound, "budget": self.budget,
            "spot_checks": self.spot_checks, "exhaustive_limit": self.exhaustive_limit,
        }

    @classmethod
    def from_dict(cls, d: dict | None) -> "AuditConfig":
        d = d or {}
        known = {k: d[k] for k in cls().to_dict() if k in d}
        for k, v in known.items():
            if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise PreconditionError(f"audit.{k} must be a nonnegative int, got {v!r}")
        return cls(**known)


# ---------------------------------------------------------------------------
# scan orders


def _tuples_by_max(n: int, r: int) -> Iterator[tuple]:
    """All index r-tuples over range(n), ordered by largest entry, then lexicographically."""

    def rest(prefix: tuple, hi: int, has_hi: bool) -> Iterator[tuple]:
        left = r - len(prefix)
        if left == 0:
            yield prefix
            return
        if left == 1 and not has_hi:
            yield prefix + (hi,)
            return
        for v in range(hi + 1):
            yield from rest(prefix + (v,), hi, has_hi or v == hi)

    for hi in range(n):
        yield from rest((), hi, False)


def _scan_domain(probe: ProbeSet, g: GroupContext, limit: int) -> tuple[tuple, bool]:
    """Probe elements first, then the rest of a small finite carrier."""
    if g.is_finite and g.order <= limit:
        seen = set(probe.order)
        rest = [x for x in g.elements() if x not in seen]
        return probe.order + tuple(rest), True
    return probe.order, False


def _enc(g: GroupContext, x) -> Any:
    return g.encode(x)


# ---------------------------------------------------------------------------
# structural properties (REFL, P1, P2, P3)


def _check_refl(rel, g, xs):
    (x,) = xs
    if not rel.related(x, x):
        return {"x": _enc(g, x)}
    return None


def _check_p1(rel, g, xs):
    x, y, z = xs
    if rel.related(x, y) and rel.related(y, z) and not rel.related(x, z):
        return {"x": _enc(g, x), "y": _enc(g, y), "z": _enc(g, z)}
    return None


def _check_p2(rel, g, xs):
    x, y = xs
    if x != y and rel.related(x, y) and rel.related(y, x):
        return {"x": _enc(g, x), "y": _enc(g, y)}
    return None


def _check_p3(rel, g, xs):
    x, y, z = xs
    if not rel.related(x, y):
        return None
    if not rel.related(g.combine(z, x), g.combine(z, y)):
        return {"g": _enc(g, x), "g_prime": _enc(g, y), "z": _enc(g, z), "side": "left"}
    if not rel.related(g.combine(x, z), g.combine(y, z)):
        return {"g": _enc(g, x), "g_prime": _enc(g, y), "z": _enc(g, z), "side": "right"}
    return None


_STRUCTURAL = {"REFL": (1, _check_refl), "P1": (3, _check_p1), "P2": (2, _check_p2), "P3": (3, _check_p3)}


def _audit_structural(prop, rel, g, probe, budget, exhaustive_limit):
    arity, check = _STRUCTURAL[prop]
    domain, full = _scan_domain(probe, g, exhaustive_limit)
    evals = 0
    complete = True
    for idx in _tuples_by_max(len(domain), arity):
        if evals >= budget:
            complete = False
            break
        evals += 1
        xs = tuple(domain[i] for i in idx)
        try:
            w = check(rel, g, xs)
        except CarrierMismatch:
            continue
        if w is not None:
            return VIOLATED, w, evals
    if complete and full:
        return PROVEN, None, evals
    return NO_VIOLATION, None, evals


# ---------------------------------------------------------------------------
# repetition properties (P4, P5 and primed forms)


def _runs(word: Sequence[int], letters: Sequence[Element], g: GroupContext) -> list:
    out = []
    for letter, grp in itertools.groupby(word):
        out.append({"b": _enc(g, letters[letter]), "p": len(list(grp))})
    return out


def _bad_letters(prop: str, rel: RelationOracle, g: GroupContext, B: FiniteSet) -> list:
    zero = g.identity
    if prop in ("P4", "P4p"):
        return [b for b in B if not rel.related(b, zero)]
    return [b for b in B if not rel.related(zero, b)]


def _violates(prop: str, rel: RelationOracle, g: GroupContext, w) -> bool:
    if prop in ("P4", "P4p"):
        return rel.related(w, g.identity)
    return rel.related(g.identity, w)


def _search_words(prop, rel, g, letters, max_len, budget):
    """Breadth-first search over words in ``letters``, deduplicated by value.

    Returns ``(witness_word, evaluations, exhausted)``; ``exhausted`` means
    every reachable value was visited (only possible in finite groups).
    """
    frontier = [((), g.identity)]
    seen: set = set()
    evals = 0
    for _length in range(1, max_len + 1):
        nxt = []
        for word, val in frontier:
            for li, b in enumerate(letters):
                w = g.combine(val, b)
                if w in seen:
                    continue
                seen.add(w)
                if evals >= budget:
                    return None, evals, False
                evals += 1
                try:
                    hit = _violates(prop, rel, g, w)
                except CarrierMismatch:
                    hit = False
                if hit:
                    return word + (li,), evals, False
                nxt.append((word + (li,), w))
        if not nxt:
            return None, evals, True
        frontier = nxt
    return None, evals, False


def _search_primed(prop, rel, g, letters, max_mult, budget):
    evals = 0
    if g.is_finite:
        # p*b only depends on p modulo the order of b
        top = g.order
    else:
        top = max_mult
    for p in range(1, top + 1):
        for li, b in enumerate(letters):
            if evals >= budget:
                return None, evals, False
            evals += 1
            try:
                hit = _violates(prop, rel, g, g.repeat(p, b))
            except CarrierMismatch:
                hit = False
            if hit:
                return (li,) * p, evals, False
    return None, evals, g.is_finite


def _rationalize(values, max_den=10**6) -> list[Fraction]:
    return [Fraction(float(v)).limit_denominator(max_den) for v in values]


def _integerize(fracs: Sequence[Fraction]) -> list[int]:
    den = 1
    for f in fracs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return [int(f * den) for f in fracs]


def _solve_exact(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Gauss-Jordan elimination over the rationals; None when singular."""
    n = len(rows)
    m = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _separating_weights(letters: Sequence[tuple], sign: int) -> list[int] | None:
    """Nonnegative integer ``y`` with ``sign * (y . b) < 0`` for every letter.

    The feasible region ``{y >= 0 : sign * (y . b) <= -1}`` lies in the
    orthant, so it is nonempty iff it has a vertex; vertices are enumerated
    exactly from every choice of ``q`` active constraints.
    """
    q = len(letters[0])

    def ok(y) -> bool:
        return all(v >= 0 for v in y) and all(sign * sum(a * b for a, b in zip(y, l)) < 0 for l in letters)

    for c in range(q):
        unit = [0] * q
        unit[c] = 1
        if ok(unit):
            return unit
    if ok([1] * q):
        return [1] * q
    constraints = [("pos", c) for c in range(q)] + [("b", l) for l in letters]
    for chosen in itertools.combinations(constraints, q):
        rows, rhs = [], []
        for tag, data in chosen:
            if tag == "pos":
                row = [0] * q
                row[data] = 1
                rows.append(row)
                rhs.append(0)
            else:
                rows.append([sign * v for v in data])
                rhs.append(-1)
        y = _solve_exact(rows, rhs)
        if y is None or any(v < 0 for v in y):
            continue
        if all(sign * sum(a * b for a, b in zip(y, l)) <= -1 for l in letters):
            return _integerize(y)
    return None


def _violating_combination(letters: Sequence[tuple], sign: int) -> list[int] | None:
    """Nonzero nonnegative integer ``p`` with ``sign * sum(p_l b_l) >= 0``."""
    from scipy.optimize import linprog

    q, k = len(letters[0]), len(letters)
    a_ub = [[-sign * letters[l][c] for l in range(k)] for c in range(q)]
    res = linprog([0] * k, A_ub=a_ub, b_ub=[0] * q, A_eq=[[1] * k], b_eq=[1],
                  bounds=[(0, None)] * k, method="highs")
    if res.status != 0:
        return None
    p = _integerize(_rationalize(res.x))
    total = [sum(p[l] * letters[l][c] for l in range(k)) for c in range(q)]
    if any(p) and all(v >= 0 for v in p) and all(sign * t >= 0 for t in total):
        return p
    return None


def product_order_certificate(prop: str, letters: Sequence[tuple]) -> tuple[str, list | None]:
    """Decide a repetition property of the componentwise order exactly.

    For P4 a violation is a nonzero nonnegative integer combination of the
    letters that is componentwise ``>= 0``; none exists iff some nonnegative
    weight vector ``y`` makes ``y . b < 0`` for every letter. P5 mirrors this
    with the inequalities reversed. Both answers are checked in exact integer
    arithmetic before being returned.

    Returns ``("holds", y)``, ``("violated", p)`` or ``("unknown", None)``.
    """
    if not letters:
        return "holds", []
    sign = 1 if prop in ("P4", "P4p") else -1
    y = _separating_weights(letters, sign)
    if y is not None:
        return "holds", y
    p = _violating_combination(letters, sign)
    if p is not None:
        return "violated", p
    return "unknown", None


def _audit_repetition(prop, rel, g, B, max_mult, length_bound, budget, spot_checks):
    letters = _bad_letters(prop, rel, g, B)
    if not letters:
        side = "bR0_G" if prop in ("P4", "P4p") else "0_GRb"
        return PROVEN, None, 0, f"every b in B satisfies {side}"

    certified = None
    if isinstance(rel, ProductOrder) and g.kind == "intvec":
        if prop in ("P4p", "P5p"):
            certs = [product_order_certificate(prop, [b]) for b in letters]
            if all(v == "holds" for v, _ in certs):
                certified = "separating weights per element " + str([y for _, y in certs])
        else:
            verdict, data = product_order_certificate(prop, letters)
            if verdict == "violated":
                word = tuple(itertools.chain.from_iterable([l] * p for l, p in enumerate(data)))
                return VIOLATED, {"combination": _runs(word, letters, g)}, 0, "linear-programming witness"
            if verdict == "holds":
                certified = f"separating weights y={data}"

    if prop in ("P4p", "P5p"):
        limit = spot_checks if certified else budget
        word, evals, exhausted = _search_primed(prop, rel, g, letters, max_mult, limit)
    else:
        limit = spot_checks if certified else budget
        word, evals, exhausted = _search_words(prop, rel, g, letters, max_mult * length_bound, limit)
    if word is not None:
        return VIOLATED, {"combination": _runs(word, letters, g)}, evals, ""
    if certified:
        return DECLARED, None, evals, certified
    if exhausted:
        return PROVEN, None, evals, "every reachable combination checked"
    return NO_VIOLATION, None, evals, ""


def audit_property(
    prop: str,
    rel: RelationOracle,
    g: GroupContext,
    probe: ProbeSet,
    B: Iterable[Element],
    max_multiplicity: int,
    *,
    length_bound: int | None = None,
    budget: int = 200_000,
    spot_checks: int = 2_000,
    exhaustive_limit: int = 64,
) -> PropertyStatus:
    if prop not in PROPERTY_IDS:
        raise PreconditionError(f"unknown property {prop!r}")
    if not probe.order:
        raise PreconditionError("probe set is empty")
    if max_multiplicity < 1:
        raise PreconditionError("max_multiplicity must be >= 1")
    B = FiniteSet(B)
    length_bound = length_bound or max(1, len(B))

    if prop in _STRUCTURAL:
        declared = prop in rel.declared
        limit = spot_checks if declared else budget
        outcome, witness, evals = _audit_structural(prop, rel, g, probe, limit, exhaustive_limit)
        evidence = ""
        if outcome == NO_VIOLATION and declared:
            outcome, evidence = DECLARED, f"declared by {rel.kind}; spot-checks passed"
        elif outcome == PROVEN:
            evidence = f"all {evals} cases over the full carrier"
        elif outcome == VIOLATED and declared:
            log.warning("%s declares %s but the audit found a counterexample", rel.kind, prop)
    else:
        outcome, witness, evals, evidence = _audit_repetition(
            prop, rel, g, B, max_multiplicity, length_bound, budget, spot_checks
        )
    return PropertyStatus(prop, outcome, witness, len(probe), probe.depth, evals, evidence)


def audit_all(
    rel: RelationOracle,
    g: GroupContext,
    A: Iterable[Element],
    B: Iterable[Element],
    config: AuditConfig | None = None,
    props: Sequence[str] = PROPERTY_IDS,
) -> dict[str, PropertyStatus]:
    A, B = FiniteSet(A), FiniteSet(B)
    cfg = (config or AuditConfig()).resolve(len(A), len(B))
    cap = max(cfg.cap, len(A) + len(B) + 1)
    probe = probe_closure(A, B, g, cfg.depth, cap)
    return {
        prop: audit_property(
            prop, rel, g, probe, B, cfg.max_multiplicity,
            length_bound=cfg.length_bound, budget=cfg.budget,
            spot_checks=cfg.spot_checks, exhaustive_limit=cfg.exhaustive_limit,
        )
        for prop in props
    }


# ---------------------------------------------------------------------------
# witness replay


def _combination_value(g: GroupContext, combination: list) -> Any:
    acc = g.identity
    for run in combination:
        acc = g.combine(acc, g.repeat(run["p"], g.decode(run["b"])))
    return acc


def replay_witness(status: PropertyStatus, rel: RelationOracle, g: GroupContext) -> bool:
    """Re-evaluate a violation witness; True when the property fails on it."""
    if status.outcome != VIOLATED or status.witness is None:
        return False
    w = status.witness
    prop = status.property_id
    dec = g.decode
    if prop == "REFL":
        return not rel.related(dec(w["x"]), dec(w["x"]))
    if prop == "P1":
        x, y, z = dec(w["x"]), dec(w["y"]), dec(w["z"])
        return rel.related(x, y) and rel.related(y, z) and not rel.related(x, z)
    if prop == "P2":
        x, y = dec(w["x"]), dec(w["y"])
        return x != y and rel.related(x, y) and rel.related(y, x)
    if prop == "P3":
        x, y, z = dec(w["g"]), dec(w["g_prime"]), dec(w["z"])
        if not rel.related(x, y):
            return False
        if w["side"] == "left":
            return not rel.related(g.combine(z, x), g.combine(z, y))
        return not rel.related(g.combine(x, z), g.combine(y, z))
    combo = w["combination"]
    if prop in ("P4p", "P5p") and len({str(r["b"]) for r in combo}) != 1:
        return False
    value = _combination_value(g, combo)
    zero = g.identity
    letters = [dec(r["b"]) for r in combo]
    if prop in ("P4", "P4p"):
        return rel.related(value, zero) and not any(rel.related(b, zero) for b in letters)
    return rel.related(zero, value) and not any(rel.related(zero, b) for b in letters)
