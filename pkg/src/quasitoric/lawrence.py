"""Lawrence lifts of 2-way models and spanning-tree counts.

For ``S = {(a_t, b_t)}`` listed in lexicographic order, the modified lift is
the 3-way index set ``{(a_t, b_t, t)} | {(a_t + m, b_t + n, t)}``.  Its
A-matrix spans the same rows as the classical lift ``(T|0; 0|T; I|I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chordal import LEFT, RIGHT, BipartiteGraph, build_graph
from .ctfp import find_ctfp
from .errors import DimensionMismatch, DisconnectedGraph, TheoremViolation
from .linalg import rowspan_equal
from .model import IndexSet, MultipartitionMatrix, build_a_matrix

OPEN_QUESTION = (
    "Open question: some other matrix with the same row span as the modified lift "
    "might still be a cTFP; this is not decided here."
)


def lawrence_lift(T) -> list[list[int]]:
    """The classical lift ``(T|0 ; 0|T ; I|I)`` of a dense integer matrix."""
    T = T.dense() if isinstance(T, MultipartitionMatrix) else [list(r) for r in T]
    n = len(T[0]) if T else 0
    zero = [0] * n
    top = [row + zero for row in T]
    mid = [zero + row for row in T]
    eye = [[1 if c == r else 0 for c in range(n)] * 2 for r in range(n)]
    return top + mid + eye


@dataclass(frozen=True)
class LawrenceLift:
    source: IndexSet
    Sprime: IndexSet
    matrix: MultipartitionMatrix

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "Sprime": self.Sprime.to_dict(),
            "matrix": self.matrix.to_dict(),
        }


def modified_lawrence_lift(S: IndexSet, verify: bool = True) -> LawrenceLift:
    if S.k != 2:
        raise DimensionMismatch(f"Lawrence lifts are built for 2-way index sets, got k={S.k}")
    m, n = S.dims
    first = [(a, b, t) for t, (a, b) in enumerate(S.tuples, start=1)]
    second = [(a + m, b + n, t) for t, (a, b) in enumerate(S.tuples, start=1)]
    Sprime = IndexSet((2 * m, 2 * n, len(S)), first + second)
    lift = build_a_matrix(Sprime)
    if verify and not rowspan_equal(lift.dense(), lawrence_lift(build_a_matrix(S))):
        raise AssertionError("modified lift does not span the rows of the classical lift")
    return LawrenceLift(S, Sprime, lift)


@dataclass(frozen=True)
class StarForestVerdict:
    ok: bool
    side: str | None  # "left", "right", "either" or None

    def __bool__(self) -> bool:
        return self.ok


def is_star_forest_same_side(G: BipartiteGraph) -> StarForestVerdict:
    """Every component a star, all centres in one part.

    Equivalent degree form: every left vertex has degree 1 (centres on the
    right) or every right vertex has degree 1 (centres on the left).
    """
    left = all(G.degree((LEFT, i)) <= 1 for i in range(1, G.m + 1))
    right = all(G.degree((RIGHT, j)) <= 1 for j in range(1, G.n + 1))
    if left and right:
        return StarForestVerdict(True, "either")
    if right:
        return StarForestVerdict(True, "left")
    if left:
        return StarForestVerdict(True, "right")
    return StarForestVerdict(False, None)


def lift_is_ctfp(S: IndexSet) -> bool:
    """Star-forest answer, cross-checked against a brute-force split search."""
    verdict = bool(is_star_forest_same_side(build_graph(S)))
    searched = bool(find_ctfp(modified_lawrence_lift(S, verify=False).Sprime))
    if verdict != searched:
        raise TheoremViolation(f"star-forest test says {verdict}, split search says {searched} for {S.tuples}")
    return verdict


def _contract(edges: tuple, u: int, v: int) -> tuple:
    out = []
    for x, y in edges:
        x = u if x == v else x
        y = u if y == v else y
        if x != y:
            out.append((min(x, y), max(x, y)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _spanning_trees(vertices: frozenset, edges: tuple) -> int:
    if len(vertices) == 1:
        return 1
    if not edges:
        return 0
    (u, v), rest = edges[0], edges[1:]
    deleted = _spanning_trees(vertices, rest)
    contracted = _spanning_trees(vertices - {v}, _contract(rest, u, v))
    return deleted + contracted


def count_spanning_trees(G: BipartiteGraph) -> int:
    """Deletion-contraction count of spanning trees (0 when disconnected)."""
    index = {v: p for p, v in enumerate(G.vertices())}
    edges = tuple(sorted((index[(LEFT, i)], index[(RIGHT, j)]) for i, j in G.edges))
    return _spanning_trees(frozenset(index.values()), edges)


def lift_ml_degree_prediction(S: IndexSet) -> int:
    """Predicted ML-degree of the lift: the number of spanning trees of G_S."""
    G = build_graph(S)
    if len(G.components()) > 1:
        if G.is_forest():
            return 1
        raise DisconnectedGraph("graph is disconnected and not a forest; no prediction is made")
    return count_spanning_trees(G)
