import random

import pytest

from effsum.audit import DECLARED, NO_VIOLATION, PropertyStatus, audit_all
from effsum.generate import FAMILIES, FAST_AUDIT, generate_instance, generate_multi_summand
from effsum.groups import CyclicGroup, FiniteSet, FinSetGroup, IntVecGroup, SymmetricGroup
from effsum.relations import PROPERTY_IDS, Equality, ExplicitMatrix, FixedPoints, ProductOrder, Superset
from effsum.verdict import (
    FAILS, HOLDS, INAPPLICABLE, LazyAudit, combined_verdict, is_consistent, oracle_verdict,
    shortcut_equality, theorem_verdict,
)

V2 = IntVecGroup(2)
PO = ProductOrder()
YU_A = [(1, 0), (0, 1), (-1, -1)]
YU_B = [(0, 0), (-1, 0), (0, -1), (-1, -1)]
EX7_A = [(-1, 0), (0, -1)]
EX7_B = [(0, 0), (-1, 1)]
LINE_A = [(x, -2 * x) for x in range(-3, 4)]
LINE_B = [(-1, 2), (-1, 1)]
POWERSET_A = [s for n in range(2, 6) for s in ((n,), (0, 1, n))]


def test_oracle_examples():
    o = oracle_verdict(YU_A, YU_B, V2, PO)
    assert o.equality_holds and o.efficient_A == FiniteSet([(1, 0), (0, 1)])
    # 12 pairwise compositions; (1,0)+(-1,0) and (0,1)+(0,-1) coincide at the origin
    assert len(YU_A) * len(YU_B) == 12 and o.sum_size == 11
    o = oracle_verdict(EX7_A, EX7_B, V2, PO)
    assert not o.equality_holds and (-2, 1) in o.efficient_sum
    assert o.sum_size == 3
    assert oracle_verdict(YU_A, [(0, 0)], V2, PO).equality_holds


@pytest.mark.parametrize("A, B, rule, direction", [
    (YU_A, YU_B, "T2", HOLDS),
    ([(0, 0)], [(1, 1)], "T4", FAILS),
    (EX7_A, EX7_B, "T9", FAILS),
    (LINE_A, LINE_B, "T8", FAILS),
])
def test_theorem_examples(A, B, rule, direction):
    v = combined_verdict(A, B, V2, PO)
    assert (v.theorem.rule, v.theorem.direction) == (rule, direction)
    assert not v.theorem.conditional and v.consistent


def test_truncated_line_gains_edge_point():
    v = combined_verdict(LINE_A, LINE_B, V2, PO)
    assert (-4, 8) in v.oracle.efficient_sum and (-4, 8) not in v.oracle.efficient_A
    assert v.oracle.sum_size == 14


def test_zmod5_trivial_equal():
    z5 = CyclicGroup(5)
    v = combined_verdict(range(5), [1], z5, Equality())
    assert (v.theorem.rule, v.theorem.direction) == ("TRIVIAL_EQUAL", HOLDS)
    assert v.oracle.equality_holds and v.consistent


def test_powerset_trivial_equal_with_isotonicity_failures():
    v = combined_verdict(POWERSET_A, [(0, 1)], FinSetGroup(), Superset())
    assert v.theorem.rule == "TRIVIAL_EQUAL" and v.consistent
    assert v.statuses["P3"].outcome == "Violated"
    assert v.statuses["P5"].outcome == "Violated"


def test_all_transpositions_trivial_equal():
    s3 = SymmetricGroup(3)
    v = combined_verdict([(2, 1, 3), (3, 2, 1), (1, 3, 2)], [(2, 3, 1)], s3, FixedPoints())
    assert v.theorem.rule == "TRIVIAL_EQUAL" and v.consistent


def test_trivial_masks_failure_rules():
    # B = {0}: any failure rule would be wrong, the trivial rule must win
    v = combined_verdict(EX7_A, [(0, 0)], V2, PO)
    assert v.theorem.rule == "TRIVIAL_EQUAL"


def _override(statuses, prop, outcome):
    out = dict(statuses)
    out[prop] = PropertyStatus(prop, outcome)
    return out


def test_sampled_property_makes_verdict_conditional():
    report = _override(audit_all(PO, V2, YU_A, YU_B), "P3", NO_VIOLATION)
    tv = theorem_verdict(YU_A, YU_B, V2, PO, report)
    assert tv.rule == "T2" and tv.conditional
    assert shortcut_equality(YU_A, YU_B, V2, PO, report) is None


def test_violated_property_blocks_rule():
    report = _override(audit_all(PO, V2, EX7_A, EX7_B), "P4", "Violated")
    report = _override(report, "P5", "Violated")
    tv = theorem_verdict(EX7_A, EX7_B, V2, PO, report)
    assert tv.rule != "T9"
    assert any(r == "T9" for r, _ in tv.blocked)


def test_inapplicable_is_always_consistent():
    tv = theorem_verdict(EX7_A, EX7_B, V2, PO, {p: PropertyStatus(p, "Violated") for p in PROPERTY_IDS})
    assert tv.direction == INAPPLICABLE
    assert is_consistent(tv, oracle_verdict(EX7_A, EX7_B, V2, PO))


def test_intransitive_isotone_relation_reaches_t1():
    # on Z/6, x R y iff x - y in {0,1,2}: translation invariant, not transitive;
    # {0,2,4} is a strict 3-cycle so E(A) is empty, and so is E(A+{1})
    g = CyclicGroup(6)
    rel = ExplicitMatrix(range(6), [[int((x - y) % 6 in (0, 1, 2)) for y in range(6)] for x in range(6)])
    v = combined_verdict([0, 2, 4], [1], g, rel)
    assert (v.theorem.rule, v.theorem.direction) == ("T1", HOLDS)
    assert not v.theorem.conditional and v.consistent
    assert v.statuses["P1"].outcome == "Violated"
    assert v.oracle.efficient_A == FiniteSet() == v.oracle.efficient_sum


@pytest.mark.parametrize("family", FAMILIES)
def test_families_reach_their_rules(family):
    expected = {
        "orthant_holds": {"T2", "TRIVIAL_EQUAL"},
        "dominating_fails": {"T4"},
        "dominated_fails": {"T3"},
        "incomparable_fails": {"T5", "T7", "T8", "NONE"},
        "with_zero_incomparable": {"T9", "T10", "NONE"},
    }.get(family)
    for seed in range(40):
        inst = generate_instance(seed, family)
        v = combined_verdict(inst.A, inst.B, inst.group, inst.relation, FAST_AUDIT, full_audit=False)
        assert v.consistent
        if expected:
            assert v.theorem.rule in expected


def test_lazy_audit_only_computes_what_is_asked():
    lazy = LazyAudit(PO, V2, YU_A, YU_B)
    theorem_verdict(YU_A, YU_B, V2, PO, lazy)
    assert set(lazy.computed()) < set(PROPERTY_IDS)
    assert all(s.outcome == DECLARED for p, s in lazy.computed().items() if p in ("P1", "P3"))


def test_multi_summand_adds_per_summand_conditions():
    inst = generate_multi_summand(4, 3)
    v = combined_verdict(inst.A, inst.effective_B(), inst.group, inst.relation, FAST_AUDIT,
                         summands=inst.summands, full_audit=False)
    assert v.theorem.rule in ("T2", "TRIVIAL_EQUAL") and v.theorem.direction == HOLDS
    if v.theorem.rule == "T2":
        assert sum(c.name.startswith("summand") for c in v.theorem.conditions) == 3


def test_shortcut_matches_oracle_on_random_instances():
    rng = random.Random(5)
    for _ in range(100):
        family = rng.choice(FAMILIES)
        inst = generate_instance(rng.randrange(10**6), family, rng.randint(1, 8), rng.randint(1, 4))
        lazy = LazyAudit(inst.relation, inst.group, inst.A, inst.B, FAST_AUDIT)
        decided = shortcut_equality(inst.A, inst.B, inst.group, inst.relation, lazy)
        if decided is not None:
            assert decided == oracle_verdict(inst.A, inst.B, inst.group, inst.relation).equality_holds
