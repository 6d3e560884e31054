import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import D, STAIRCASE, SIX_CYCLE, FIVE_CLIQUES, brute_maximal_cliques, cells, full
from quasitoric.census import all_supports
from quasitoric.chordal import ml_degree_one_2way
from quasitoric.cliques import (
    Clique,
    build_poset,
    e_clique_col,
    e_clique_row,
    indicator_combination,
    maximal_cliques,
    maximal_intersections,
)
from quasitoric.errors import NonTerminatingRecursion, NotDoublyChordal
from quasitoric.linalg import combine_rows
from quasitoric.model import IndexSet, build_a_matrix, trim


def clique(name):
    return Clique(*D[name])


def meet(a, b):
    return clique(a).meet(clique(b))


def test_five_cliques_maximal_cliques():
    assert set(maximal_cliques(FIVE_CLIQUES)) == {clique(n) for n in D}


def test_five_cliques_intersections():
    found = {x.clique.cells() for x in maximal_intersections(FIVE_CLIQUES)}
    assert found == {cells("11 12"), cells("21 22"), cells("24 25"), cells("25 45")}


def test_five_cliques_poset():
    P = build_poset(FIVE_CLIQUES)
    name = {P.index(clique(n)): n for n in D}
    assert {(name[a], name[b]) for a, b in P.covers} == {("D1", "D3"), ("D2", "D3"), ("D2", "D4"), ("D4", "D5")}
    assert {n: P.level(clique(n)) for n in D} == {"D1": 1, "D2": 1, "D3": 2, "D4": 2, "D5": 3}
    assert P.h == 3


def test_full_block():
    S = full(3, 2)
    assert maximal_cliques(S) == [Clique({1, 2, 3}, {1, 2})]
    assert maximal_intersections(S) == []
    P = build_poset(S)
    assert (P.levels, P.h, P.covers) == ([1], 1, [])
    for i in range(1, 4):
        assert e_clique_row(S, i) == Clique({1, 2, 3}, {1, 2})


def test_staircase_chain():
    cl = maximal_cliques(STAIRCASE)
    assert set(cl) == {Clique({1}, {1, 2, 3}), Clique({1, 2}, {1, 2}), Clique({1, 2, 3}, {1})}
    assert {x.clique.cells() for x in maximal_intersections(STAIRCASE)} == {cells("11 12"), cells("11 21")}
    P = build_poset(STAIRCASE)
    assert [P.level(c) for c in (Clique({1}, {1, 2, 3}), Clique({1, 2}, {1, 2}), Clique({1, 2, 3}, {1}))] == [1, 2, 3]


def test_e_cliques_five_cliques():
    for i, n in enumerate(["D1", "D2", "D3", "D4", "D5"], start=1):
        assert e_clique_row(FIVE_CLIQUES, i) == clique(n)
    expected = {1: "D3", 2: "D3", 3: "D1", 4: "D4", 5: "D5"}
    for j, n in expected.items():
        assert e_clique_col(FIVE_CLIQUES, j) == clique(n)


def test_golden_indicator_combinations():
    want = {
        ("D1", "D3"): {"a_1": 1, "b_3": -1},
        ("D2", "D3"): {"a_2": 1, "b_4": -1, "b_5": -1, "a_4": 1, "a_5": 1},
        ("D2", "D4"): {"b_4": 1, "b_5": 1, "a_4": -1, "a_5": -1},
        ("D4", "D5"): {"b_5": 1, "a_5": -1},
    }
    for (a, b), terms in want.items():
        assert indicator_combination(FIVE_CLIQUES, meet(a, b)).terms() == terms


def test_indicator_trace_d2_d3():
    combo = indicator_combination(FIVE_CLIQUES, meet("D2", "D3"))
    assert combo.trace == ((frozenset({2}), frozenset({4, 5})), (frozenset({4, 5}), frozenset()))
    assert str(combo) == "a_2 + a_4 + a_5 - b_4 - b_5"


def test_raw_recursion_kept_for_d4_d5():
    combo = indicator_combination(FIVE_CLIQUES, meet("D4", "D5"))
    assert combo.raw_row_coeffs == {1: 1, 2: 1, 3: 1, 4: 1}
    assert combo.raw_col_coeffs == {1: -1, 2: -1, 3: -1, 4: -1}


def test_recursion_detects_cycle():
    with pytest.raises(NonTerminatingRecursion):
        indicator_combination(SIX_CYCLE, Clique({1}, {1}))


def test_poset_requires_chordality():
    with pytest.raises(NotDoublyChordal):
        build_poset(SIX_CYCLE)


def _chordal_sets(limit):
    return [S for S in all_supports(limit, limit) if ml_degree_one_2way(S)]


CHORDAL_4 = _chordal_sets(4)


def test_cliques_match_brute_force():
    for S in CHORDAL_4:
        assert {(c.rows, c.cols) for c in maximal_cliques(S)} == brute_maximal_cliques(S)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.tuples(st.integers(1, 5), st.integers(1, 5)), min_size=1, max_size=20))
def test_cliques_match_brute_force_any_graph(cellset):
    S = trim(cellset)[0]
    assert {(c.rows, c.cols) for c in maximal_cliques(S)} == brute_maximal_cliques(S)


def test_poset_structure_on_census():
    for S in CHORDAL_4:
        P = build_poset(S)
        cl = P.ground
        for a in cl:
            for b in cl:
                assert (a.rows <= b.rows) == (b.cols <= a.cols)
        covers = set(P.covers)
        meets = {x.clique for x in P.intersections}
        for a in range(len(cl)):
            for b in range(len(cl)):
                if cl[a] < cl[b]:
                    assert ((a, b) in covers) == (cl[a].meet(cl[b]) in meets)
        for lo, hi in P.covers:
            assert P.levels[lo] + 1 == P.levels[hi]
        for comp in P.components:
            assert min(P.levels[d] for d in comp) == 1
        # level interpolation along every row
        for x in range(1, S.dims[0] + 1):
            lv = sorted({P.levels[d] for d, c in enumerate(cl) if x in c.rows})
            assert lv == list(range(lv[0], lv[-1] + 1))


def test_indicator_identity_on_census():
    rng = random.Random(5)
    sample = rng.sample(_chordal_sets(5), 300)
    for S in sample + CHORDAL_4:
        A = build_a_matrix(S)
        for x in maximal_intersections(S):
            combo = indicator_combination(S, x.clique)
            target = [1 if t in x.clique.cells() else 0 for t in S]
            assert combine_rows(A, combo.coefficients(S)) == target


def test_e_cliques_on_census():
    for S in CHORDAL_4:
        cl = maximal_cliques(S)
        for i in range(1, S.dims[0] + 1):
            assert e_clique_row(S, i, cl) in cl
        for j in range(1, S.dims[1] + 1):
            assert e_clique_col(S, j, cl) in cl
