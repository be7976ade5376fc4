import itertools
import random

import pytest

from effsum.audit import (
    DECLARED, NO_VIOLATION, PROVEN, VIOLATED, AuditConfig, PropertyStatus, audit_all,
    audit_property, probe_closure, product_order_certificate, replay_witness,
)
from effsum.errors import PreconditionError
from effsum.groups import CyclicGroup, FiniteSet, FinSetGroup, IntVecGroup, SymmetricGroup
from effsum.relations import PROPERTY_IDS, Equality, ExplicitMatrix, FixedPoints, ProductOrder, Superset

V2 = IntVecGroup(2)
PO = ProductOrder()


def _audit(prop, rel, g, A, B, mult=8, depth=1, **kw):
    probe = probe_closure(A, B, g, depth)
    opts = dict(length_bound=max(1, len(FiniteSet(B))), budget=20_000, spot_checks=500,
                exhaustive_limit=64)
    opts.update(kw)
    return audit_property(prop, rel, g, probe, FiniteSet(B), mult, **opts)


def test_probe_depth_one():
    seeds = {(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)}
    expected = seeds | {(x[0] + y[0], x[1] + y[1]) for x in seeds for y in seeds}
    probe = probe_closure([(1, 0)], [(0, 1)], V2, 1)
    assert set(probe.order) == expected
    assert probe.order[:2] == ((1, 0), (0, 1))
    assert not probe.truncated


def test_probe_rejects_depth_zero():
    with pytest.raises(PreconditionError):
        probe_closure([(1, 0)], [(0, 1)], V2, 0)


def test_probe_cap_truncates():
    probe = probe_closure([(1, 0)], [(0, 1)], V2, 3, cap=7)
    assert probe.truncated and len(probe) == 7


def test_probe_of_whole_finite_group_is_the_group():
    z5 = CyclicGroup(5)
    for depth in (1, 2, 3):
        assert set(probe_closure(range(5), [1], z5, depth).order) == set(range(5))


def test_fixed_points_antisymmetry_violated():
    s3 = SymmetricGroup(3)
    st = _audit("P2", FixedPoints(), s3, [(2, 1, 3), (3, 2, 1)], [(2, 3, 1)])
    assert st.outcome == VIOLATED
    assert st.witness == {"x": [2, 1, 3], "y": [3, 2, 1]}
    assert replay_witness(st, FixedPoints(), s3)


def test_zmod5_repetition_violated_at_five():
    z5 = CyclicGroup(5)
    st = _audit("P4", Equality(), z5, range(5), [1], mult=5)
    assert st.outcome == VIOLATED
    assert st.witness == {"combination": [{"b": 1, "p": 5}]}
    assert replay_witness(st, Equality(), z5)
    # the violation needs five copies; a bound of four cannot see it
    assert _audit("P4", Equality(), z5, range(5), [1], mult=4).outcome == NO_VIOLATION


def test_superset_p5_violated_at_two():
    fs = FinSetGroup()
    st = _audit("P5", Superset(), fs, [(2,), (0, 1, 2)], [(0, 1)])
    assert st.outcome == VIOLATED
    assert st.witness["combination"] == [{"b": [0, 1], "p": 2}]
    assert replay_witness(st, Superset(), fs)


@pytest.mark.parametrize("prop", ["REFL", "P1", "P2", "P3"])
def test_product_order_structural_properties_declared(prop):
    rng = random.Random(prop)
    for _ in range(10):
        A = [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(4)]
        B = [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)]
        assert _audit(prop, PO, V2, A, B, depth=2).outcome == DECLARED


def _brute_violation(prop, letters, bound):
    """Smallest-search for a nonzero multiplicity vector whose sum breaks ``prop``."""
    sign = 1 if prop == "P4" else -1
    for p in itertools.product(range(bound + 1), repeat=len(letters)):
        if not any(p):
            continue
        s = [sum(pi * b[c] for pi, b in zip(p, letters)) for c in range(len(letters[0]))]
        if all(sign * v >= 0 for v in s):
            return p
    return None


@pytest.mark.parametrize("seed", range(80))
def test_product_order_certificate_agrees_with_search(seed):
    rng = random.Random(seed)
    dim = rng.choice([2, 3])
    letters = []
    while len(letters) < rng.randint(1, 3):
        v = tuple(rng.randint(-4, 4) for _ in range(dim))
        if any(c > 0 for c in v) and any(c < 0 for c in v):
            letters.append(v)
    for prop in ("P4", "P5"):
        verdict, data = product_order_certificate(prop, letters)
        found = _brute_violation(prop, letters, 6)
        if found is not None:
            assert verdict == "violated"
        if verdict == "holds":
            assert found is None
            # the weights separate every letter strictly
            sign = 1 if prop == "P4" else -1
            assert all(sign * sum(y * c for y, c in zip(data, b)) < 0 for b in letters)
        if verdict == "violated":
            sign = 1 if prop == "P4" else -1
            s = [sum(p * b[c] for p, b in zip(data, letters)) for c in range(dim)]
            assert any(data) and all(x >= 0 for x in data) and all(sign * v >= 0 for v in s)


def test_certificate_examples():
    assert product_order_certificate("P4", [(1, -1), (-1, 1)])[0] == "violated"
    assert product_order_certificate("P4", [(1, -2)])[0] == "holds"
    assert product_order_certificate("P5", [(1, -2), (-3, 1)])[0] == "violated"


def _random_tables(count):
    rng = random.Random(11)
    for _ in range(count):
        n = rng.randint(2, 5)
        m = [[1 if i == j or rng.random() < 0.5 else 0 for j in range(n)] for i in range(n)]
        yield CyclicGroup(n), ExplicitMatrix(list(range(n)), m), rng


@pytest.mark.parametrize("case", range(25))
def test_every_violation_replays_and_survives_larger_bounds(case):
    g, rel, rng = list(_random_tables(25))[case]
    A = rng.sample(range(g.order), rng.randint(1, g.order))
    B = rng.sample(range(g.order), rng.randint(1, g.order))
    small = audit_all(rel, g, A, B, AuditConfig(depth=1, max_multiplicity=4))
    large = audit_all(rel, g, A, B, AuditConfig(depth=3, max_multiplicity=9))
    for prop in PROPERTY_IDS:
        if small[prop].outcome == VIOLATED:
            assert replay_witness(small[prop], rel, g)
            assert large[prop].outcome == VIOLATED
        if large[prop].outcome == VIOLATED:
            assert replay_witness(large[prop], rel, g)


def test_whole_group_structural_audit_is_exhaustive():
    g = CyclicGroup(4)
    rel = ExplicitMatrix(range(4), [[1] * 4 for _ in range(4)])
    statuses = audit_all(rel, g, range(4), [1], AuditConfig(depth=1))
    assert all(statuses[p].outcome == PROVEN for p in ("REFL", "P1", "P3"))


def test_status_and_config_round_trip():
    st = PropertyStatus("P4", VIOLATED, {"combination": [{"b": 1, "p": 5}]}, 5, 1, 5, "x")
    assert PropertyStatus.from_dict(st.to_dict()) == st
    cfg = AuditConfig(depth=3, max_multiplicity=7)
    assert AuditConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(PreconditionError):
        AuditConfig.from_dict({"depth": -1})
