import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import STAIRCASE, FIVE_CLIQUES, full
from quasitoric.errors import DimensionMismatch, InvalidIndexSet
from quasitoric.model import (
    IndexSet,
    MultipartitionMatrix,
    Row,
    build_a_matrix,
    from_star,
    labelled_index_set,
    star_matrix,
    trim,
    validate_multipartition,
)

STAIRCASE_MATRIX = [
    [1, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 1],
    [0, 1, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0],
]

# golden 10 x 12 matrix of the five-clique example (columns 11 ... 55)
FIVE_CLIQUES_MATRIX = [
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1],
]


def test_staircase_matrix():
    A = build_a_matrix(STAIRCASE)
    assert A.dense() == STAIRCASE_MATRIX
    assert A.labels() == ["a_1", "a_2", "a_3", "b_1", "b_2", "b_3"]
    assert A.columns == ((1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1))


def test_single_cell_matrix():
    A = build_a_matrix(IndexSet((1, 1), [(1, 1)]))
    assert A.dense() == [[1], [1]]


def test_five_cliques_matrix():
    assert build_a_matrix(FIVE_CLIQUES).dense() == FIVE_CLIQUES_MATRIX


def test_index_set_json_round_trip():
    text = '{"dims":[3,3],"tuples":[[1,1],[1,2],[1,3],[2,1],[2,2],[3,1]]}'
    S = IndexSet.from_json(text)
    assert S == STAIRCASE
    assert S.to_json() == text


def test_matrix_json_shape():
    data = json.loads(build_a_matrix(STAIRCASE).to_json())
    assert data["columns"][0] == [1, 1]
    assert data["blocks"][0]["rows"][0] == {"label": "a_1", "entries": [1, 1, 1, 0, 0, 0]}
    assert MultipartitionMatrix.from_dict(data) == build_a_matrix(STAIRCASE)


@pytest.mark.parametrize(
    "dims, tuples",
    [
        ((2, 2), [(1, 1), (1, 1)]),
        ((2, 2), [(1, 1), (3, 1)]),
        ((2, 2), [(1, 1), (2, 1)]),  # column 2 unused
        ((0, 2), []),
        ((2, 2), [(1, 1, 1)]),
    ],
)
def test_invalid_index_sets(dims, tuples):
    with pytest.raises(InvalidIndexSet):
        IndexSet(dims, tuples)


def test_malformed_json():
    with pytest.raises(InvalidIndexSet):
        IndexSet.from_json("{bad")
    with pytest.raises(InvalidIndexSet):
        IndexSet.from_json('{"dims":[2]}')
    with pytest.raises(InvalidIndexSet):
        IndexSet.from_json('{"dims":[2],"tuples":[[1.5]]}')


def test_trim_renumbers():
    S, maps = trim([(2, 5), (4, 5), (4, 7)])
    assert S.tuples == ((1, 1), (2, 1), (2, 2))
    assert maps == [{2: 1, 4: 2}, {5: 1, 7: 2}]


def test_labelled_index_set():
    S, alpha = labelled_index_set([("x", "p"), ("y", "p"), ("y", "q")])
    assert S.tuples == ((1, 1), (2, 1), (2, 2))
    assert alpha == [["x", "y"], ["p", "q"]]


def test_star_matrix():
    assert str(star_matrix(STAIRCASE)) == "* * *\n* * 0\n* 0 0"
    assert all(all(row) for row in star_matrix(full(2, 2)).support)
    assert from_star(star_matrix(FIVE_CLIQUES)) == FIVE_CLIQUES
    with pytest.raises(DimensionMismatch):
        star_matrix(IndexSet.from_tuples([(1, 1, 1)]))


def test_validation_pass_and_fail():
    A = build_a_matrix(STAIRCASE)
    assert validate_multipartition(A).passed
    broken_row = Row("a_1", (0,) + A.blocks[0][0].entries[1:])
    broken = MultipartitionMatrix(A.columns, ((broken_row,) + A.blocks[0][1:], A.blocks[1]))
    report = validate_multipartition(broken)
    assert not report.passed
    assert report.failure == (1, (1, 1))
    assert not report.checks["one-per-column"]


@st.composite
def index_sets(draw, max_k=4, max_d=4):
    k = draw(st.integers(1, max_k))
    dims = [draw(st.integers(1, max_d)) for _ in range(k)]
    cells = draw(
        st.sets(st.tuples(*[st.integers(1, d) for d in dims]), min_size=1, max_size=12)
    )
    return trim(cells)[0]


@settings(max_examples=100, deadline=None)
@given(index_sets())
def test_a_matrix_invariants(S):
    A = build_a_matrix(S)
    assert A.shape == (sum(S.dims), len(S))
    assert validate_multipartition(A).passed
    for block in A.blocks:
        assert [sum(col) for col in zip(*(r.entries for r in block))] == [1] * len(S)
