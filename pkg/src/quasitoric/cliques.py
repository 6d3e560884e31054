"""Maximal cliques of a 2-way index set and the poset they form.

A clique is a rectangle ``rows x cols`` contained in ``S``.  Maximal cliques
are ordered by containment of their row sets; for models with rational MLE
the cover graph of this order is a forest and carries a level function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .chordal import ml_degree_one_2way
from .errors import (
    DimensionMismatch,
    InvalidIndexSet,
    NonTerminatingRecursion,
    NotDoublyChordal,
    NotTreeError,
)
from .linalg import combine_rows
from .model import IndexSet, build_a_matrix


def _fmt_set(xs) -> str:
    return "{" + ",".join(str(x) for x in sorted(xs)) + "}"


@dataclass(frozen=True)
class Clique:
    rows: frozenset
    cols: frozenset

    def __post_init__(self):
        object.__setattr__(self, "rows", frozenset(self.rows))
        object.__setattr__(self, "cols", frozenset(self.cols))
        if not self.rows or not self.cols:
            raise InvalidIndexSet("a clique needs at least one row and one column")

    def cells(self) -> frozenset:
        return frozenset((i, j) for i in self.rows for j in self.cols)

    def __le__(self, other: "Clique") -> bool:
        return self.rows <= other.rows

    def __lt__(self, other: "Clique") -> bool:
        return self.rows < other.rows

    def meet(self, other: "Clique") -> "Clique | None":
        rows, cols = self.rows & other.rows, self.cols & other.cols
        if rows and cols:
            return Clique(rows, cols)
        return None

    def sort_key(self):
        return (min(self.rows), min(self.cols), len(self.rows), sorted(self.rows), sorted(self.cols))

    @property
    def label(self) -> str:
        return f"{_fmt_set(self.rows)}x{_fmt_set(self.cols)}"

    def to_dict(self) -> dict:
        return {"rows": sorted(self.rows), "cols": sorted(self.cols)}

    def __str__(self) -> str:
        return self.label


def _require_2way(S: IndexSet) -> None:
    if S.k != 2:
        raise DimensionMismatch(f"cliques are defined for 2-way index sets, got k={S.k}")


def row_neighbors(S: IndexSet) -> dict[int, frozenset]:
    out = {i: set() for i in range(1, S.dims[0] + 1)}
    for i, j in S:
        out[i].add(j)
    return {i: frozenset(js) for i, js in out.items()}


def col_neighbors(S: IndexSet) -> dict[int, frozenset]:
    out = {j: set() for j in range(1, S.dims[1] + 1)}
    for i, j in S:
        out[j].add(i)
    return {j: frozenset(is_) for j, is_ in out.items()}


def maximal_cliques(S: IndexSet) -> list[Clique]:
    """All maximal rectangles in ``S``, sorted canonically.

    Every maximal rectangle is closed under the row/column Galois connection,
    so its column set is an intersection of row neighbourhoods.  We close the
    family of row neighbourhoods under pairwise intersection.
    """
    _require_2way(S)
    rnb, cnb = row_neighbors(S), col_neighbors(S)
    family = set(rnb.values())
    frontier = list(family)
    while frontier:
        new = []
        for c in frontier:
            for d in rnb.values():
                x = c & d
                if x and x not in family:
                    family.add(x)
                    new.append(x)
        frontier = new
    cliques = []
    for cols in family:
        rows = frozenset(i for i, nb in rnb.items() if cols <= nb)
        clique = Clique(rows, cols)
        # closed pair: no addable row or column
        assert frozenset.intersection(*(rnb[i] for i in rows)) == cols
        assert frozenset.intersection(*(cnb[j] for j in cols)) == rows
        cliques.append(clique)
    return sorted(cliques, key=Clique.sort_key)


@dataclass(frozen=True)
class Intersection:
    clique: Clique
    # every pair (lower, upper) of ground indices with D ∩ E equal to this clique
    pairs: tuple

    @property
    def label(self) -> str:
        return self.clique.label


def _pairwise_meets(cliques: list[Clique]) -> dict[Clique, list[tuple[int, int]]]:
    meets = {}
    for a in range(len(cliques)):
        for b in range(a + 1, len(cliques)):
            m = cliques[a].meet(cliques[b])
            if m is None:
                continue
            lo, hi = (b, a) if cliques[b] < cliques[a] else (a, b)
            meets.setdefault(m, []).append((lo, hi))
    return meets


def maximal_intersections(S: IndexSet, cliques: list[Clique] | None = None) -> list[Intersection]:
    _require_2way(S)
    cliques = maximal_cliques(S) if cliques is None else cliques
    meets = _pairwise_meets(cliques)
    out = []
    for m, pairs in meets.items():
        bigger = any(m != o and m.rows <= o.rows and m.cols <= o.cols for o in meets)
        if not bigger:
            out.append(Intersection(m, tuple(sorted(pairs))))
    return sorted(out, key=lambda x: (x.pairs[0], x.clique.sort_key()))


@dataclass
class CliquePoset:
    ground: list
    covers: list  # (lower index, upper index)
    levels: list
    intersections: list
    components: list = field(default_factory=list)

    @property
    def h(self) -> int:
        return max(self.levels)

    def index(self, clique: Clique) -> int:
        return self.ground.index(clique)

    def level(self, clique: Clique) -> int:
        return self.levels[self.index(clique)]

    def cover_pair(self, x: Intersection) -> tuple[int, int]:
        covers = set(self.covers)
        for pair in x.pairs:
            if pair in covers:
                return pair
        raise NotTreeError(f"maximal intersection {x.label} is not generated by a cover pair")

    def intersection_level(self, x: Intersection) -> int:
        """Level of the lower clique of the cover generating ``x``."""
        return self.levels[self.cover_pair(x)[0]]

    def cliques_at(self, level: int) -> list[int]:
        return [d for d, lv in enumerate(self.levels) if lv == level]

    def to_dict(self) -> dict:
        return {
            "ground": [c.to_dict() for c in self.ground],
            "covers": [list(p) for p in self.covers],
            "levels": list(self.levels),
            "intersections": [
                {**x.clique.to_dict(), "pairs": [list(p) for p in x.pairs]} for x in self.intersections
            ],
        }


def _covers(cliques: list[Clique]) -> list[tuple[int, int]]:
    n = len(cliques)
    less = [[cliques[a] < cliques[b] for b in range(n)] for a in range(n)]
    out = []
    for a in range(n):
        for b in range(n):
            if less[a][b] and not any(less[a][c] and less[c][b] for c in range(n)):
                out.append((a, b))
    return out


def _assign_levels(n: int, covers: list[tuple[int, int]]) -> tuple[list[int], list[list[int]]]:
    nbrs = {d: [] for d in range(n)}
    for lo, hi in covers:
        nbrs[lo].append((hi, 1))
        nbrs[hi].append((lo, -1))
    level = [None] * n
    components = []
    for root in range(n):
        if level[root] is not None:
            continue
        level[root] = 0
        comp = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, step in nbrs[x]:
                want = level[x] + step
                if level[y] is None:
                    level[y] = want
                    comp.append(y)
                    queue.append(y)
                elif level[y] != want:
                    raise NotTreeError(f"inconsistent levels between cliques {x} and {y}")
        low = min(level[d] for d in comp)
        for d in comp:
            level[d] = level[d] - low + 1
        components.append(sorted(comp))
    return level, components


def build_poset(S: IndexSet, check: bool = True) -> CliquePoset:
    """The poset of maximal cliques with covers and per-component levels."""
    _require_2way(S)
    if check:
        verdict = ml_degree_one_2way(S)
        if not verdict:
            raise NotDoublyChordal(
                f"graph is not doubly chordal bipartite ({verdict.witness.describe()})", verdict.witness
            )
    ground = maximal_cliques(S)
    covers = _covers(ground)
    levels, components = _assign_levels(len(ground), covers)
    if len(covers) != len(ground) - len(components):
        raise NotTreeError("the cover graph of the clique poset is not a forest")
    return CliquePoset(ground, covers, levels, maximal_intersections(S, ground), components)


def e_clique_row(S: IndexSet, i: int, cliques: list[Clique] | None = None) -> Clique:
    """The smallest maximal clique containing row ``i``."""
    _require_2way(S)
    if not 1 <= i <= S.dims[0]:
        raise InvalidIndexSet(f"row {i} outside 1..{S.dims[0]}")
    rnb = row_neighbors(S)
    cols = rnb[i]
    E = Clique(frozenset(r for r, nb in rnb.items() if cols <= nb), cols)
    cliques = maximal_cliques(S) if cliques is None else cliques
    assert E in cliques, f"E_{i} = {E} is not a maximal clique"
    assert all(E <= D for D in cliques if i in D.rows)
    return E


def e_clique_col(S: IndexSet, j: int, cliques: list[Clique] | None = None) -> Clique:
    """The largest maximal clique containing column ``j``."""
    _require_2way(S)
    if not 1 <= j <= S.dims[1]:
        raise InvalidIndexSet(f"column {j} outside 1..{S.dims[1]}")
    cnb = col_neighbors(S)
    rows = cnb[j]
    E = Clique(rows, frozenset(c for c, nb in cnb.items() if rows <= nb))
    cliques = maximal_cliques(S) if cliques is None else cliques
    assert E in cliques, f"E^{j} = {E} is not a maximal clique"
    assert all(D <= E for D in cliques if j in D.cols)
    return E


@dataclass(frozen=True)
class IndicatorCombination:
    row_coeffs: dict
    col_coeffs: dict
    # [(A_k, B_k)] for k = 1, 2, ...; B_0 is the column set of the clique
    trace: tuple
    raw_row_coeffs: dict = field(default_factory=dict)
    raw_col_coeffs: dict = field(default_factory=dict)

    def coefficients(self, S: IndexSet) -> list[int]:
        """Coefficients against the rows of ``build_a_matrix(S)``."""
        m, n = S.dims
        return [self.row_coeffs.get(i, 0) for i in range(1, m + 1)] + [
            self.col_coeffs.get(j, 0) for j in range(1, n + 1)
        ]

    def terms(self) -> dict[str, int]:
        out = {f"a_{i}": c for i, c in sorted(self.row_coeffs.items()) if c}
        out.update({f"b_{j}": c for j, c in sorted(self.col_coeffs.items()) if c})
        return out

    def __str__(self) -> str:
        text = ""
        for name, c in self.terms().items():
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            if not text:
                text = f"{'-' if c < 0 else ''}{mag}{name}"
            else:
                text += f" {'-' if c < 0 else '+'} {mag}{name}"
        return text or "0"


def _component_of(S: IndexSet, rows: frozenset) -> tuple[set, set]:
    rnb, cnb = row_neighbors(S), col_neighbors(S)
    seen_r, seen_c = set(rows), set()
    stack = [("r", i) for i in rows]
    while stack:
        side, x = stack.pop()
        nbs = rnb[x] if side == "r" else cnb[x]
        for y in nbs:
            bucket = seen_c if side == "r" else seen_r
            if y not in bucket:
                bucket.add(y)
                stack.append(("c" if side == "r" else "r", y))
    return seen_r, seen_c


def indicator_combination(S: IndexSet, C: Clique) -> IndicatorCombination:
    """Write the indicator of ``C`` as a signed sum of the rows of A_S.

    Alternately peels neighbourhoods: B_k = N(A_k) - B_{k-1} and
    A_{k+1} = N(B_k) - A_k, summing +a_i over A_k and -b_j over B_k.  The
    combination is unique only up to the left kernel of A_S (one relation
    sum(a) - sum(b) per connected component), so the representative with the
    smaller support is returned; the raw recursion output is kept as well.
    """
    _require_2way(S)
    rnb, cnb = row_neighbors(S), col_neighbors(S)
    limit = S.dims[0] + S.dims[1]
    A = [frozenset(C.rows)]
    B = [frozenset(C.cols)]
    trace = []
    while True:
        Bk = frozenset().union(*(rnb[i] for i in A[-1])) - B[-1]
        trace.append((A[-1], Bk))
        B.append(Bk)
        if not Bk:
            break
        Ak = frozenset().union(*(cnb[j] for j in Bk)) - A[-1]
        for u, Au in enumerate(A[:-1]):
            if Au & Ak:
                raise NonTerminatingRecursion(
                    f"A_{u + 1} and A_{len(A) + 1} overlap on rows {sorted(Au & Ak)}", (u + 1, len(A) + 1)
                )
        if not Ak:
            break
        A.append(Ak)
        if len(A) > limit:
            raise NonTerminatingRecursion("recursion exceeded m+n steps", (len(A),))
    raw_rows = {i: 1 for Ak in A for i in Ak}
    raw_cols = {j: -1 for Bk in B[1:] for j in Bk}
    comp_rows, comp_cols = _component_of(S, C.rows)
    alt_rows = {i: -1 for i in comp_rows if i not in raw_rows}
    alt_cols = {j: 1 for j in comp_cols if j not in raw_cols}
    if len(alt_rows) + len(alt_cols) < len(raw_rows) + len(raw_cols):
        rows, cols = alt_rows, alt_cols
    else:
        rows, cols = raw_rows, raw_cols
    combo = IndicatorCombination(rows, cols, tuple(trace), raw_rows, raw_cols)
    target = [1 if t in C.cells() else 0 for t in S]
    for coeffs in (combo.coefficients(S), _raw_coefficients(S, raw_rows, raw_cols)):
        if combine_rows(build_a_matrix(S), coeffs) != target:
            raise AssertionError(f"indicator expansion of {C} does not reproduce the clique")
    return combo


def _raw_coefficients(S: IndexSet, rows: dict, cols: dict) -> list[int]:
    m, n = S.dims
    return [rows.get(i, 0) for i in range(1, m + 1)] + [cols.get(j, 0) for j in range(1, n + 1)]
