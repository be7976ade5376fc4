import pytest

from effsum.errors import InvalidSizes
from effsum.generate import FAMILIES, generate_instance, generate_multi_summand, sweep_sizes
from effsum.relations import efficient_set
from effsum.verdict import combined_verdict


def test_seed_one_orthant_is_t2():
    inst = generate_instance(1, "orthant_holds", size_a=5, size_b=3, dim=2)
    v = combined_verdict(inst.A, inst.B, inst.group, inst.relation)
    assert (v.theorem.rule, v.theorem.direction) == ("T2", "Holds") and v.consistent


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic(family):
    assert generate_instance(9, family).to_json() == generate_instance(9, family).to_json()


def test_incomparable_singleton():
    for seed in range(50):
        (b,) = generate_instance(seed, "incomparable_fails", size_b=1).B
        assert any(c > 0 for c in b) and any(c < 0 for c in b)


@pytest.mark.parametrize("seed", range(100))
def test_family_guarantees(seed):
    kw = sweep_sizes(seed, "orthant_holds")
    zero = (0,) * kw["dim"]
    po = generate_instance(seed, "orthant_holds", **kw)
    assert zero in po.B and all(po.relation.related(zero, b) for b in po.B)
    dom = generate_instance(seed, "dominating_fails", **kw)
    assert any(dom.relation.strictly(b, zero) for b in dom.B)
    assert efficient_set(dom.A, dom.relation).efficient
    sub = generate_instance(seed, "dominated_fails", **kw)
    assert all(sub.relation.strictly(zero, b) for b in sub.B)
    inc = generate_instance(seed, "incomparable_fails", **kw)
    assert all(inc.relation.incomparable(b, zero) for b in inc.B)
    wz = generate_instance(seed, "with_zero_incomparable", **kw)
    assert zero in wz.B and len(wz.B) >= 2
    assert all(wz.relation.incomparable(b, zero) for b in wz.B if b != zero)
    assert not efficient_set(wz.A, wz.relation).dominated


def test_sizes_respected():
    inst = generate_instance(2, "random", size_a=7, size_b=4, dim=3)
    assert len(inst.A) == 7 and len(inst.B) <= 4 and inst.group.dim == 3


@pytest.mark.parametrize("kw", [
    {"size_a": 0}, {"size_b": -1}, {"dim": 0}, {"size_a": 200}, {"family": "nope"},
])
def test_invalid_sizes(kw):
    family = kw.pop("family", "random")
    with pytest.raises(InvalidSizes):
        generate_instance(1, family, **kw)


def test_multi_summand_shape():
    inst = generate_multi_summand(5, 3)
    assert len(inst.summands) == 3
    zero = inst.group.identity
    for S in inst.summands:
        assert zero in S and all(inst.relation.related(zero, b) for b in S)
    with pytest.raises(InvalidSizes):
        generate_multi_summand(1, 0)
