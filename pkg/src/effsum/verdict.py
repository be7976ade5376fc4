"""Deciding whether ``E(A + B) = E(A)``.

Three routes are combined: the trivial check ``A + B = A``, the theorem
rules (gated on audited or declared relation properties), and a brute-force
oracle that computes both efficient sets. A theorem verdict that disagrees
with the oracle is reported, not raised.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .audit import (
    AVAILABLE, NO_VIOLATION, VIOLATED, AuditConfig, PropertyStatus, audit_all,
    audit_property, probe_closure,
)
from .groups import FiniteSet, GroupContext, minkowski_sum
from .relations import PROPERTY_IDS, RelationOracle, efficient_set

Element = Hashable

HOLDS = "Holds"
FAILS = "Fails"
INAPPLICABLE = "Inapplicable"

RULES = ("TRIVIAL_EQUAL", "T2", "T1", "T4", "T3", "T5", "T7", "T8", "T9", "T10", "NONE")

REQUIRED = {
    "T2": ("REFL", "P1", "P2", "P3"),
    "T1": ("REFL", "P3"),
    "T4": ("REFL", "P3"),
    "T3": ("REFL", "P3"),
    "T5": ("REFL", "P2", "P3", "P4", "P5"),
    "T7": ("REFL", "P1", "P3", "P4"),
    "T8": ("REFL", "P1", "P3", "P4"),
    "T9": ("REFL", "P1", "P3", "P5"),
    "T10": ("REFL", "P1", "P3", "P5"),
}


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    evidence: str = ""

    def to_dict(self) -> dict:
        return {"condition": self.name, "passed": self.passed, "evidence": self.evidence}


@dataclass(frozen=True)
class TheoremVerdict:
    rule: str
    direction: str
    conditions: tuple = ()
    property_basis: dict = field(default_factory=dict)
    conditional: bool = False
    blocked: tuple = ()

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "direction": self.direction,
            "conditional": self.conditional,
            "conditions": [c.to_dict() for c in self.conditions],
            "property_basis": dict(self.property_basis),
            "blocked": [{"rule": r, "reason": why} for r, why in self.blocked],
        }


@dataclass(frozen=True)
class OracleVerdict:
    efficient_A: FiniteSet
    efficient_sum: FiniteSet
    equality_holds: bool
    sum_size: int = 0


@dataclass(frozen=True)
class Verdict:
    theorem: TheoremVerdict
    oracle: OracleVerdict
    consistent: bool
    statuses: dict = field(default_factory=dict)


class LazyAudit(Mapping):
    """Property statuses computed on first access, sharing one probe set."""

    def __init__(self, rel, g, A, B, config: AuditConfig | None = None):
        self.rel, self.g = rel, g
        self.A, self.B = FiniteSet(A), FiniteSet(B)
        self.config = (config or AuditConfig()).resolve(len(self.A), len(self.B))
        self._probe = None
        self._cache: dict[str, PropertyStatus] = {}

    def _get_probe(self):
        if self._probe is None:
            cfg = self.config
            cap = max(cfg.cap, len(self.A) + len(self.B) + 1)
            self._probe = probe_closure(self.A, self.B, self.g, cfg.depth, cap)
        return self._probe

    def __getitem__(self, prop: str) -> PropertyStatus:
        if prop not in PROPERTY_IDS:
            raise KeyError(prop)
        if prop not in self._cache:
            cfg = self.config
            self._cache[prop] = audit_property(
                prop, self.rel, self.g, self._get_probe(), self.B, cfg.max_multiplicity,
                length_bound=cfg.length_bound, budget=cfg.budget,
                spot_checks=cfg.spot_checks, exhaustive_limit=cfg.exhaustive_limit,
            )
        return self._cache[prop]

    def __iter__(self):
        return iter(PROPERTY_IDS)

    def __len__(self):
        return len(PROPERTY_IDS)

    def computed(self) -> dict[str, PropertyStatus]:
        return {p: self._cache[p] for p in PROPERTY_IDS if p in self._cache}


def oracle_verdict(A, B, g: GroupContext, rel: RelationOracle) -> OracleVerdict:
    A = FiniteSet(A)
    total = minkowski_sum(A, B, g)
    eff_a = efficient_set(A, rel).efficient
    eff_sum = efficient_set(total, rel).efficient
    return OracleVerdict(eff_a, eff_sum, eff_a == eff_sum, len(total))


class _Facts:
    """Lazily computed facts about one instance, shared by all rules."""

    def __init__(self, A, B, g, rel, report):
        self.A, self.B, self.g, self.rel, self.report = A, B, g, rel, report
        self.zero = g.identity
        self.total = minkowski_sum(A, B, g)
        self.trivial = set(self.total) == set(A)
        self._eff_a = None
        self._eff_sum = None

    def available(self, prop) -> bool:
        return self.report[prop].outcome in AVAILABLE

    @property
    def eff_a(self) -> FiniteSet:
        if self._eff_a is None:
            self._eff_a = efficient_set(self.A, self.rel).efficient
        return self._eff_a

    def eff_a_nonempty(self) -> tuple[bool, str]:
        if self.available("P1"):
            return True, "A finite and R transitive, so E(A) is nonempty"
        return bool(self.eff_a), f"|E(A)| = {len(self.eff_a)} by direct computation"

    def eff_sum_nonempty(self) -> tuple[bool, str]:
        if self.available("P1"):
            return True, "A+B finite and R transitive, so E(A+B) is nonempty"
        if self._eff_sum is None:
            self._eff_sum = efficient_set(self.total, self.rel).efficient
        return bool(self._eff_sum), f"|E(A+B)| = {len(self._eff_sum)} by direct computation"

    def stable_a(self) -> tuple[bool, str]:
        n_dom = len(self.A) - len(self.eff_a)
        return n_dom == 0, f"{n_dom} dominated point(s) in A"

    def fmt(self, x) -> str:
        return self.g.format(x)


def _structural(rule: str, f: _Facts) -> list[Condition] | None:
    """Non-property conditions of a rule, or None when one of them fails."""
    rel, zero, B = f.rel, f.zero, f.B
    conds: list[Condition] = []

    def need(name, ok, evidence="") -> bool:
        conds.append(Condition(name, bool(ok), evidence))
        return bool(ok)

    nontrivial = ("A+B ≠ A", True, f"|A+B| = {len(f.total)}, |A| = {len(f.A)}")
    if rule == "T2":
        if not need("0_G ∈ B", zero in B):
            return None
        bad = [b for b in B if not rel.related(zero, b)]
        if not need("0_G R b for all b ∈ B", not bad, f"all {len(B)} elements checked"):
            return None
    elif rule == "T1":
        ok, ev = f.eff_a_nonempty()
        if not need("E(A) = ∅", not ok, ev):
            return None
    elif rule == "T4":
        ok, ev = f.eff_a_nonempty()
        if not need("E(A) ≠ ∅", ok, ev):
            return None
        hits = [b for b in B if rel.strictly(b, zero)]
        if not need("∃ b° ∈ B with b° P 0_G", hits, f"b° = {f.fmt(hits[0])}" if hits else ""):
            return None
        need(*nontrivial)
    elif rule == "T3":
        bad = [b for b in B if not rel.strictly(zero, b)]
        if not need("0_G P b for all b ∈ B", not bad, f"all {len(B)} elements checked"):
            return None
        ok, ev = f.eff_sum_nonempty()
        if not need("E(A+B) ≠ ∅", ok, ev):
            return None
        need(*nontrivial)
    elif rule == "T5":
        if not need("B = {b}", len(B) == 1, f"|B| = {len(B)}"):
            return None
        if not need("b ≠ 0_G", B[0] != zero, f"b = {f.fmt(B[0])}"):
            return None
        ok, ev = f.stable_a()
        if not need("A stable", ok, ev):
            return None
        need(*nontrivial)
    elif rule in ("T7", "T8"):
        single = len(B) == 1
        if not need("|B| = 1" if rule == "T7" else "|B| ≥ 2", single == (rule == "T7"), f"|B| = {len(B)}"):
            return None
        bad = [b for b in B if not rel.incomparable(b, zero)]
        if not need("b I 0_G for all b ∈ B", not bad, f"all {len(B)} elements checked"):
            return None
        need(*nontrivial)
    elif rule in ("T9", "T10"):
        if not need("0_G ∈ B", zero in B):
            return None
        rest = [b for b in B if b != zero]
        want_one = rule == "T9"
        label = "B = {0_G, b}" if want_one else "B = {0_G, b¹, …, bᵐ}, m ≥ 2"
        if not need(label, rest and (len(rest) == 1) == want_one, f"{len(rest)} nonzero element(s)"):
            return None
        bad = [b for b in rest if not rel.incomparable(b, zero)]
        if not need("b I 0_G for all b ∈ B \\ {0_G}", not bad, f"all {len(rest)} elements checked"):
            return None
        ok, ev = f.stable_a()
        if not need("A stable", ok, ev):
            return None
        need(*nontrivial)
    else:
        raise ValueError(rule)
    return conds


_DIRECTION = {"T2": HOLDS, "T1": HOLDS, "T4": FAILS, "T3": FAILS, "T5": FAILS,
              "T7": FAILS, "T8": FAILS, "T9": FAILS, "T10": FAILS}


def theorem_verdict(
    A: Iterable[Element],
    B: Iterable[Element],
    g: GroupContext,
    rel: RelationOracle,
    report: Mapping[str, PropertyStatus],
    summands: Sequence[Iterable[Element]] | None = None,
) -> TheoremVerdict:
    """First matching rule in the fixed precedence, with its conditions.

    A rule is blocked when a property it needs is ``Violated``. A rule that
    relies on a ``NoViolationFound`` property still fires but is marked
    ``conditional``.
    """
    A, B = FiniteSet(A), FiniteSet(B)
    f = _Facts(A, B, g, rel, report)
    if f.trivial:
        return TheoremVerdict(
            "TRIVIAL_EQUAL", HOLDS,
            (Condition("A+B = A", True, f"|A+B| = |A| = {len(A)}"),),
        )
    blocked = []
    for rule in ("T2", "T1", "T4", "T3", "T5", "T7", "T8", "T9", "T10"):
        conds = _structural(rule, f)
        if conds is None:
            continue
        basis = {}
        conditional = False
        reason = None
        for prop in REQUIRED[rule]:
            st = report[prop]
            basis[prop] = st.outcome
            if st.outcome == VIOLATED:
                reason = f"{prop} Violated"
                break
            if st.outcome == NO_VIOLATION:
                conditional = True
            conds.append(Condition(f"{prop} available", True, st.outcome))
        if reason:
            blocked.append((rule, reason))
            continue
        if rule == "T2" and summands:
            for i, Bi in enumerate(summands, start=1):
                Bi = FiniteSet(Bi)
                ok = g.identity in Bi and all(rel.related(g.identity, b) for b in Bi)
                conds.append(Condition(f"summand {i}: 0_G ∈ B_{i} and 0_G R b", ok,
                                       f"|B_{i}| = {len(Bi)}"))
        return TheoremVerdict(rule, _DIRECTION[rule], tuple(conds), basis, conditional, tuple(blocked))
    return TheoremVerdict("NONE", INAPPLICABLE, (), {}, False, tuple(blocked))


def is_consistent(theorem: TheoremVerdict, oracle: OracleVerdict) -> bool:
    if theorem.direction == INAPPLICABLE:
        return True
    return (theorem.direction == HOLDS) == oracle.equality_holds


def combined_verdict(
    A: Iterable[Element],
    B: Iterable[Element],
    g: GroupContext,
    rel: RelationOracle,
    config: AuditConfig | None = None,
    *,
    summands: Sequence[Iterable[Element]] | None = None,
    full_audit: bool = True,
) -> Verdict:
    """Audit, decide by theorem, decide by brute force, and cross-check.

    With ``full_audit=False`` only the properties a candidate rule asks for
    are audited.
    """
    A, B = FiniteSet(A), FiniteSet(B)
    g.check(*A)
    g.check(*B)
    if full_audit:
        report: Mapping[str, PropertyStatus] = audit_all(rel, g, A, B, config)
    else:
        report = LazyAudit(rel, g, A, B, config)
    theorem = theorem_verdict(A, B, g, rel, report, summands)
    oracle = oracle_verdict(A, B, g, rel)
    statuses = dict(report) if full_audit else report.computed()
    return Verdict(theorem, oracle, is_consistent(theorem, oracle), statuses)


def shortcut_equality(A, B, g, rel, report) -> bool | None:
    """Equality decided by an unconditional theorem rule, or None."""
    tv = theorem_verdict(A, B, g, rel, report)
    if tv.direction == INAPPLICABLE or tv.conditional:
        return None
    return tv.direction == HOLDS
