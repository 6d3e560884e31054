from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import GLUED_NINE, LEFT_FACTOR, RIGHT_FACTOR, NO_SPLIT, SMALL_TREE, brute_is_ctfp
from quasitoric.ctfp import (
    SplitSpec,
    canonical_splits,
    check_frequency_condition,
    check_swap_condition,
    equal_multiplicity_condition,
    factorize,
    find_ctfp,
    glue,
    split,
)
from quasitoric.errors import ConditionFailed, DimensionMismatch, InvalidSplit
from quasitoric.lawrence import modified_lawrence_lift
from quasitoric.model import IndexSet, trim

MIDDLE = SplitSpec(2, frozenset({1, 2}))


def test_glue_reproduces_nine_triples():
    assert glue(LEFT_FACTOR, 2, RIGHT_FACTOR, 1).S == GLUED_NINE


def test_glue_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        glue(LEFT_FACTOR, 2, IndexSet.from_tuples([(1, 1), (2, 2)]), 1)


def test_search_and_factor_glued_nine():
    found = find_ctfp(GLUED_NINE)
    assert [spec for spec, _ in found] == [MIDDLE]
    fact = factorize(GLUED_NINE, MIDDLE)
    assert fact.S1 == LEFT_FACTOR and fact.S2 == RIGHT_FACTOR
    assert fact.reassemble() == GLUED_NINE
    assert fact.predicted_ml_degree() == 1


def test_glued_nine_multisets():
    first, second = split(GLUED_NINE, MIDDLE)
    assert first == Counter({(1, 1): 2, (1, 3): 2, (2, 1): 2, (2, 2): 1, (3, 3): 2})
    assert second == Counter({(1, 1): 2, (1, 3): 2, (3, 2): 2, (3, 3): 2, (2, 1): 1})
    bar1, bar2 = split(GLUED_NINE, SplitSpec(1, frozenset({1, 2})))
    assert bar1 == first
    assert bar2 == Counter([(1, 1), (1, 3), (1, 2), (1, 3), (2, 1), (2, 3), (2, 1), (3, 2), (3, 3)])
    assert bar2[(1, 1)] == 1 and bar2[(1, 3)] == 2
    assert not check_frequency_condition(GLUED_NINE, SplitSpec(1, frozenset({1, 2})))


def test_no_split_is_not_a_ctfp():
    assert find_ctfp(NO_SPLIT) == []
    for spec in canonical_splits(3):
        assert not check_swap_condition(NO_SPLIT, spec)
        assert not check_frequency_condition(NO_SPLIT, spec)
        with pytest.raises(ConditionFailed):
            factorize(NO_SPLIT, spec)


def test_no_split_first_coordinate_multisets():
    first, second = split(NO_SPLIT, SplitSpec(1, frozenset({1, 2})))
    assert first == Counter({(1, 2): 2, (1, 1): 1, (2, 2): 1})
    assert second == Counter({(1, 1): 1, (1, 2): 2, (2, 2): 1})


def _violates(S, spec, s1, s2):
    """The pair shares the j-state and one cross combination is missing."""
    axes_a, axes_b = spec.axes_a(), spec.axes_b(S.k)
    if s1[spec.j - 1] != s2[spec.j - 1]:
        return False
    crosses = []
    for left, right in ((s1, s2), (s2, s1)):
        t = list(right)
        for a in axes_a:
            t[a - 1] = left[a - 1]
        crosses.append(tuple(t))
    return any(c not in S for c in crosses)


@pytest.mark.parametrize(
    "j, pair",
    [(1, ((2, 1, 2), (2, 2, 3))), (2, ((1, 1, 1), (2, 1, 2))), (3, ((2, 1, 2), (5, 3, 2)))],
)
def test_known_swap_witnesses_on_lawrence_lift(j, pair):
    Sp = modified_lawrence_lift(SMALL_TREE).Sprime
    spec = canonical_splits(3)[j - 1]
    assert spec.j == j
    assert _violates(Sp, spec, *pair)
    found = check_swap_condition(Sp, spec)
    assert not found and _violates(Sp, spec, *found.witness[:2])
    assert found.witness[2] not in Sp


def test_literal_multiplicity_reading_is_weaker():
    S = IndexSet.from_tuples([(1, 1, 1), (2, 1, 2)])
    spec = SplitSpec(2, frozenset({1, 2}))
    assert equal_multiplicity_condition(S, spec)
    assert not check_swap_condition(S, spec)
    assert not check_frequency_condition(S, spec)


@pytest.mark.parametrize(
    "j, inA",
    [(0, {0, 1}), (1, {2, 3}), (1, {1}), (1, {1, 2, 3}), (1, {1, 4})],
)
def test_invalid_splits(j, inA):
    with pytest.raises(InvalidSplit):
        SplitSpec(j, frozenset(inA)).validate(3)


def test_canonical_split_count():
    for k in range(3, 6):
        assert len(canonical_splits(k)) == k * (2 ** (k - 2) - 1)


def test_search_needs_three_axes():
    with pytest.raises(InvalidSplit):
        find_ctfp(LEFT_FACTOR)


@st.composite
def index_sets(draw):
    k = draw(st.integers(3, 4))
    dims = [draw(st.integers(1, 3)) for _ in range(k)]
    cells = draw(st.sets(st.tuples(*[st.integers(1, d) for d in dims]), min_size=1, max_size=14))
    return trim(cells)[0]


@settings(max_examples=200, deadline=None)
@given(index_sets())
def test_three_criteria_agree(S):
    for spec in canonical_splits(S.k):
        oracle = brute_is_ctfp(S, spec)
        assert bool(check_swap_condition(S, spec)) == oracle
        assert check_frequency_condition(S, spec) == oracle


@settings(max_examples=100, deadline=None)
@given(index_sets(), index_sets())
def test_glue_then_factor_round_trip(S1, S2):
    if S1.dims[-1] != S2.dims[0]:
        return
    glued = glue(S1, S1.k, S2, 1).S
    spec = SplitSpec(S1.k, frozenset(range(1, S1.k + 1)))
    fact = factorize(glued, spec)
    assert fact.reassemble() == glued
