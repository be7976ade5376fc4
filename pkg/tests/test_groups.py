import random

import pytest
from hypothesis import given, settings, strategies as st

from effsum.errors import CarrierMismatch, EmptyOperand, PreconditionError, ValidationError
from effsum.groups import (
    CayleyGroup, CyclicGroup, FiniteSet, FinSetGroup, IntVecGroup, SymmetricGroup,
    group_from_descriptor, minkowski_sum, minkowski_sum_many,
)

from helpers import GROUPS, KLEIN, naive_sum, random_sets

V2 = IntVecGroup(2)
S3 = SymmetricGroup(3)
Z5 = CyclicGroup(5)
FS = FinSetGroup()
T12, T13, T23 = (2, 1, 3), (3, 2, 1), (1, 3, 2)
C123 = (2, 3, 1)


def test_intvec_combine():
    assert V2.combine((1, 2), (-1, 0)) == (0, 2)


def test_permutation_left_operand_acts_first():
    assert S3.combine(T12, C123) == T13


def test_finset_symmetric_difference():
    assert FS.combine((2,), (0, 1)) == (0, 1, 2)


@pytest.mark.parametrize("g, x, inv", [
    (V2, (3, -1), (-3, 1)),
    (Z5, 2, 3),
    (FS, (0, 1), (0, 1)),
])
def test_inverse_examples(g, x, inv):
    assert g.inverse(x) == inv
    assert g.combine(x, inv) == g.identity


def test_repeat_examples():
    assert V2.repeat(0, (7, 7)) == (0, 0)
    assert Z5.repeat(5, 1) == 0
    assert V2.repeat(3, (1, -2)) == (3, -6)


def test_repeat_rejects_negative():
    with pytest.raises(PreconditionError):
        V2.repeat(-1, (1, 1))


def test_minkowski_examples():
    assert minkowski_sum([(1, 0)], [(0, 0), (-1, 0)], V2) == FiniteSet([(0, 0), (1, 0)])
    assert minkowski_sum(range(5), [1], Z5) == FiniteSet(range(5))
    assert minkowski_sum([T12, T13, T23], [C123], S3) == FiniteSet([T12, T13, T23])


def test_example_one_pair_is_not_fixed():
    # with left-first composition {(12),(13)} + {(123)} moves off the pair
    assert minkowski_sum([T12, T13], [C123], S3) == FiniteSet([T13, T23])


def test_minkowski_many_examples():
    A = FiniteSet([(3, 1), (0, 0)])
    assert minkowski_sum_many(A, [[(0, 0)], [(0, 0)]], V2) == A
    got = minkowski_sum_many([(2, 2)], [[(0, 0), (-1, 0)], [(0, 0), (0, -1)]], V2)
    assert got == FiniteSet([(2, 2), (1, 2), (2, 1), (1, 1)])


def test_empty_operand():
    with pytest.raises(EmptyOperand):
        minkowski_sum([], [(0, 0)], V2)
    with pytest.raises(EmptyOperand):
        minkowski_sum_many([], [[(0, 0)]], V2)


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatch):
        V2.combine((1, 2, 3), (0, 0))
    with pytest.raises(CarrierMismatch):
        Z5.combine(5, 1)
    with pytest.raises(CarrierMismatch):
        S3.inverse((1, 1, 3))


@pytest.mark.parametrize("raw", [[1, 1, 3], [0, 1, 2], [1, 2]])
def test_perm_decode_rejects_non_bijections(raw):
    with pytest.raises(ValidationError):
        S3.decode(raw)


def test_finset_decode_requires_sorted_naturals():
    assert FS.decode([0, 3]) == (0, 3)
    for raw in ([3, 0], [1, 1], [-1]):
        with pytest.raises(ValidationError):
            FS.decode(raw)


def test_cayley_table_validation():
    assert CayleyGroup.cyclic(4).combine(3, 2) == 1
    with pytest.raises(ValidationError):
        CayleyGroup([[0, 1], [1, 1]])  # 1 has no inverse
    with pytest.raises(ValidationError):
        # identity and inverses exist but (1+1)+2 != 1+(1+2)
        CayleyGroup([[0, 1, 2], [1, 2, 1], [2, 0, 0]])


def test_descriptor_round_trip():
    for g, _ in GROUPS:
        assert group_from_descriptor(g.descriptor()) == g


def test_finiteset_is_canonical():
    assert FiniteSet([(1, 0), (0, 1), (1, 0)]) == ((0, 1), (1, 0))


@pytest.mark.parametrize("seed", range(60))
def test_group_axioms_on_random_elements(seed):
    g, (xs, ys, zs) = random_sets(seed)
    for x, y, z in zip(xs, ys, zs):
        assert g.combine(g.combine(x, y), z) == g.combine(x, g.combine(y, z))
        assert g.combine(x, g.identity) == x == g.combine(g.identity, x)
        assert g.combine(x, g.inverse(x)) == g.identity


def _reference_op(g):
    if isinstance(g, IntVecGroup):
        return lambda a, b: tuple(p + q for p, q in zip(a, b))
    if isinstance(g, SymmetricGroup):
        # apply a, then b, as maps on 1..n
        return lambda a, b: tuple(b[a[i] - 1] for i in range(len(a)))
    if isinstance(g, CyclicGroup):
        return lambda a, b: (a + b) % g.n
    if isinstance(g, FinSetGroup):
        return lambda a, b: tuple(sorted(set(a) ^ set(b)))
    return lambda a, b: KLEIN.table[a][b]


@pytest.mark.parametrize("seed", range(40))
def test_minkowski_matches_reference(seed):
    g, (A, B, _) = random_sets(seed)
    assert set(minkowski_sum(A, B, g)) == naive_sum(A, B, _reference_op(g))


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=7),
    st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=5),
    st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=5),
)
def test_associativity_and_identity_property(A, B, C):
    left = minkowski_sum(minkowski_sum(A, B, V2), C, V2)
    right = minkowski_sum(A, minkowski_sum(B, C, V2), V2)
    assert left == right
    assert minkowski_sum(A, [(0, 0)], V2) == FiniteSet(A) == minkowski_sum([(0, 0)], A, V2)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=9),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_translation_is_injective(A, b):
    assert len(minkowski_sum(A, [b], V2)) == len(FiniteSet(A))


def test_repeat_matches_iterated_combine():
    rng = random.Random(3)
    for g, draw in GROUPS:
        x = draw(rng, g, 1)[0]
        acc = g.identity
        for p in range(7):
            assert g.repeat(p, x) == acc
            acc = g.combine(acc, x)
