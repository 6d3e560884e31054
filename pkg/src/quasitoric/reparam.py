"""Reparametrized multipartition matrix of a 2-way model with rational MLE.

The matrix has one block per level boundary ``r = 0..h``.  Block ``r`` holds
indicator rows for the level-``r`` maximal intersections, the rows ``a_i`` of
states not yet absorbed by a clique of level ``<= r``, and the columns ``b_j``
already finished by level ``r``.  Each column of ``S`` is labelled by the
(h+1)-tuple of rows that cover it, one per block.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cliques import CliquePoset, build_poset, e_clique_col, e_clique_row, indicator_combination
from .ctfp import SplitSpec, check_swap_condition
from .errors import ConstructionError, DecompositionInvariantFailure, DimensionMismatch
from .linalg import RowSpace, combine_rows, integer_kernel_basis, rowspan_equal
from .model import IndexSet, MultipartitionMatrix, Row, build_a_matrix, labelled_index_set, validate_multipartition

# label tags: ("a", i) for a row state, ("b", j) for a column state,
# ("X", x) for the maximal intersection with index x in poset.intersections
ROW, COL, MEET = "a", "b", "X"


@dataclass(frozen=True)
class LevelSets:
    h: int
    X: tuple  # X[r]: intersection indices of level r
    R: tuple  # R[r]: frozenset of rows
    C: tuple  # C[r]: frozenset of columns

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "X": [list(x) for x in self.X],
            "R": [sorted(r) for r in self.R],
            "C": [sorted(c) for c in self.C],
        }


def level_sets(S: IndexSet, poset: CliquePoset) -> LevelSets:
    m, n = S.dims
    h = poset.h
    X = [[] for _ in range(h + 1)]
    for x, meet in enumerate(poset.intersections):
        X[poset.intersection_level(meet)].append(x)
    X = [tuple(sorted(xs, key=lambda x: poset.cover_pair(poset.intersections[x]))) for xs in X]
    R = [frozenset(range(1, m + 1))]
    C = [frozenset()]
    for r in range(1, h + 1):
        at_r = [poset.ground[d] for d in poset.cliques_at(r)]
        above = [poset.ground[d] for d in poset.cliques_at(r + 1)]
        R.append(R[-1] - frozenset().union(*(D.rows for D in at_r)))
        done = frozenset().union(*(D.cols for D in at_r)) - frozenset().union(*(D.cols for D in above))
        C.append(C[-1] | done)
    sets = LevelSets(h, tuple(X), tuple(R), tuple(C))
    assert not X[0] and not X[h], "level-0 or level-h intersections"
    assert R[h] == frozenset() and C[h] == frozenset(range(1, n + 1)), "boundary sets are wrong"
    assert all(R[r + 1] <= R[r] and C[r] <= C[r + 1] for r in range(h))
    return sets


@dataclass
class ReparamMatrix:
    S: IndexSet
    poset: CliquePoset
    levels: LevelSets
    matrix: MultipartitionMatrix
    # one (h+1)-tuple of tags per column of S, in the column order of A_S
    barS: list
    checks: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return self.levels.h

    def name(self, tag) -> str:
        kind, value = tag
        if kind == MEET:
            return self.poset.intersections[value].label
        return f"{kind}_{value}"

    def barS_names(self) -> list[tuple[str, ...]]:
        return [tuple(self.name(t) for t in labels) for labels in self.barS]

    def column_map(self) -> dict:
        """Columns of A_S to columns of the reparametrized matrix (same order)."""
        return {t: p for p, t in enumerate(self.S.tuples)}

    def to_dict(self) -> dict:
        out = self.matrix.to_dict()
        out["barS"] = [list(names) for names in self.barS_names()]
        return out


def _indicator(S: IndexSet, cells) -> tuple[int, ...]:
    return tuple(1 if t in cells else 0 for t in S)


def build_bar_matrix(S: IndexSet, poset: CliquePoset | None = None, verify: bool = True) -> ReparamMatrix:
    poset = build_poset(S) if poset is None else poset
    sets = level_sets(S, poset)
    A = build_a_matrix(S)
    blocks, tags = [], []
    for r in range(sets.h + 1):
        rows, block_tags = [], []
        for x in sets.X[r]:
            meet = poset.intersections[x]
            entries = _indicator(S, meet.clique.cells())
            if verify:
                combo = indicator_combination(S, meet.clique)
                if tuple(combine_rows(A, combo.coefficients(S))) != entries:
                    raise ConstructionError(f"indicator of {meet.label} is not in the row span", r)
            rows.append(Row(meet.label, entries))
            block_tags.append((MEET, x))
        for i in sorted(sets.R[r]):
            rows.append(Row(f"a_{i}", _indicator(S, {t for t in S if t[0] == i})))
            block_tags.append((ROW, i))
        for j in sorted(sets.C[r]):
            rows.append(Row(f"b_{j}", _indicator(S, {t for t in S if t[1] == j})))
            block_tags.append((COL, j))
        blocks.append(tuple(rows))
        tags.append(block_tags)
    M = MultipartitionMatrix(S.tuples, tuple(blocks))
    report = validate_multipartition(M)
    if not report.passed:
        raise ConstructionError(f"not a multipartition matrix: {report.message}", report.failure[0])
    owners = M.block_assignment()
    barS = [tuple(tags[r][owners[r][c]] for r in range(sets.h + 1)) for c in range(len(S))]
    checks = {"multipartition": True}
    if verify:
        if not rowspan_equal(M.dense(), A.dense()):
            raise ConstructionError("row span differs from the A-matrix")
        checks["rowspan-equal"] = True
    return ReparamMatrix(S, poset, sets, M, barS, checks)


def bar_index_set(rep: ReparamMatrix) -> tuple[IndexSet, list]:
    """barS as an integer index set, with the per-position tag alphabets."""
    return labelled_index_set(rep.barS)


def verify_internal_ctfp(rep: ReparamMatrix) -> dict:
    """Swap-condition check at every internal position 1..h-1 (0-based).

    Returns ``{position: SwapCheck}``; empty when h = 1.
    """
    if rep.h < 2:
        return {}
    T, _ = bar_index_set(rep)
    out = {}
    for r in range(1, rep.h):
        spec = SplitSpec(r + 1, frozenset(range(1, r + 2)))
        out[r] = check_swap_condition(T, spec)
    return out


@dataclass
class LinearDecompositionStep:
    r: int
    T: list  # distinct truncations after position r
    Tprime: Counter  # labels of position r+1 with multiplicities
    partition_index: set
    G: dict
    H: dict
    checks: dict = field(default_factory=dict)

    def product(self) -> Counter:
        out = Counter()
        for x, part in self.G.items():
            for g in part:
                for label, mult in self.H.get(x, Counter()).items():
                    out[g + (label,)] += mult
        return out


def _block_matrix(labels: list) -> list[list[int]]:
    """Single partition block over a list of labels (repeats allowed)."""
    alphabet = sorted(set(labels))
    return [[1 if lab == a else 0 for lab in labels] for a in alphabet]


def _decomposition_step(rep: ReparamMatrix, r: int, cols_of_row: dict, E_row: dict, E_col: dict) -> LinearDecompositionStep:
    poset, sets = rep.poset, rep.levels
    level = poset.levels
    R, C, X = sets.R, sets.C, sets.X
    truncated = Counter(labels[: r + 2] for labels in rep.barS)
    T = sorted({labels[: r + 1] for labels in rep.barS})

    Tprime = Counter()
    for x in X[r + 1]:
        Tprime[(MEET, x)] = len(poset.intersections[x].clique.cols)
    for i in R[r + 1]:
        Tprime[(ROW, i)] = len(cols_of_row[i])
    for j in C[r + 1]:
        Tprime[(COL, j)] = 1

    index = {("row", i) for i in R[r + 1]} | {("col", j) for j in C[r]}
    index |= {("clique", d) for d in poset.cliques_at(r + 1)}

    G: dict = {}
    for t in T:
        kind, value = t[-1]
        if kind == ROW and value in R[r + 1]:
            key = ("row", value)
        elif kind == ROW and value in R[r]:
            key = ("clique", E_row[value])
        elif kind == COL and value in C[r]:
            key = ("col", value)
        elif kind == MEET and value in X[r] and level[poset.cover_pair(poset.intersections[value])[1]] == r + 1:
            key = ("clique", poset.cover_pair(poset.intersections[value])[1])
        else:
            raise DecompositionInvariantFailure(f"no G-part for {t}", r, t)
        if key not in index:
            raise DecompositionInvariantFailure(f"G-part {key} is outside the partition index", r, t)
        G.setdefault(key, []).append(t)

    H: dict = {}
    for label, mult in sorted(Tprime.items()):
        kind, value = label
        if kind == ROW and value in R[r + 1]:
            key = ("row", value)
        elif kind == MEET and level[poset.cover_pair(poset.intersections[value])[0]] == r + 1:
            key = ("clique", poset.cover_pair(poset.intersections[value])[0])
        elif kind == COL and value in C[r]:
            key = ("col", value)
        elif kind == COL and value in C[r + 1]:
            d = E_col[value]
            if level[d] == r + 1:
                key = ("clique", d)
            else:
                # E^j is then minimal, so equal to E_i for a row i
                rows = [i for i, e in E_row.items() if e == d]
                key = ("row", min(rows)) if rows else None
        else:
            key = None
        if key is None or key not in index:
            raise DecompositionInvariantFailure(f"no valid H-part for {label} (got {key})", r, label)
        H.setdefault(key, Counter())[label] = mult

    step = LinearDecompositionStep(r, T, Tprime, index, G, H)
    if set(G) != set(H):
        raise DecompositionInvariantFailure(f"G and H index different parts: {set(G) ^ set(H)}", r)
    if step.product() != truncated:
        diff = (step.product() - truncated) or (truncated - step.product())
        raise DecompositionInvariantFailure("glued parts do not reproduce the truncation", r, next(iter(diff)))
    step.checks["reassembly"] = True

    T_set, alphabets = labelled_index_set(T)
    A_T = build_a_matrix(T_set)
    space = RowSpace(A_T)
    position = {t: T_set.position(tuple(alphabets[a].index(x) + 1 for a, x in enumerate(t))) for t in T}
    for key, part in G.items():
        vec = [0] * len(T)
        for t in part:
            vec[position[t]] = 1
        if not space.contains(vec):
            raise DecompositionInvariantFailure(f"G-part {key} is not homogeneous", r, key)
    step.checks["G-homogeneous"] = True

    columns = [label for label, mult in sorted(Tprime.items()) for _ in range(mult)]
    block = _block_matrix(columns)
    bspace = RowSpace(block)
    for key, part in H.items():
        if not bspace.contains([1 if lab in part else 0 for lab in columns]):
            raise DecompositionInvariantFailure(f"H-part {key} is not homogeneous", r, key)
    step.checks["H-homogeneous"] = True

    for vec in integer_kernel_basis(block) if len(columns) > len(set(columns)) else []:
        support = [p for p, x in enumerate(vec) if x]
        ok = len(support) == 2 and sorted(vec[p] for p in support) == [-1, 1]
        if not ok or columns[support[0]] != columns[support[1]]:
            raise DecompositionInvariantFailure(f"kernel vector {vec} is not linear", r)
    step.checks["linear-ideal"] = True
    return step


def linear_decomposition(rep: ReparamMatrix) -> list[LinearDecompositionStep]:
    S, poset = rep.S, rep.poset
    cols_of_row = {i: {j for (a, j) in S if a == i} for i in range(1, S.dims[0] + 1)}
    E_row = {i: poset.index(e_clique_row(S, i, poset.ground)) for i in range(1, S.dims[0] + 1)}
    E_col = {j: poset.index(e_clique_col(S, j, poset.ground)) for j in range(1, S.dims[1] + 1)}
    return [_decomposition_step(rep, r, cols_of_row, E_row, E_col) for r in range(rep.h)]


def _oriented(S: IndexSet, shared_last: bool) -> IndexSet:
    if S.k != 2:
        raise DimensionMismatch("factor reparametrization needs 2-way factors")
    if shared_last:
        return S
    return IndexSet((S.dims[1], S.dims[0]), [(j, i) for i, j in S])


def glued_bar_matrix(S1: IndexSet, j1: int, S2: IndexSet, j2: int) -> tuple[MultipartitionMatrix, IndexSet]:
    """Reparametrize two 2-way factors and glue them along the shared axis.

    The factor with the shared axis last contributes all its blocks; the
    other contributes every block after its first (the shared axis itself).
    Columns follow the lexicographic order of the glued 3-way index set.
    """
    from .ctfp import glue

    F1 = _oriented(S1, j1 == 2)
    F2 = _oriented(S2, j2 != 2)
    rep1, rep2 = build_bar_matrix(F1), build_bar_matrix(F2)
    label1 = dict(zip(F1.tuples, rep1.barS_names()))
    label2 = dict(zip(F2.tuples, rep2.barS_names()))
    glued = glue(F1, 2, F2, 1).S
    labels = [label1[(x, s)] + label2[(s, y)][1:] for x, s, y in glued]
    return matrix_from_labels(glued.tuples, labels), glued


def matrix_from_labels(columns, labels: list) -> MultipartitionMatrix:
    """Multipartition matrix whose block p has one row per distinct label at position p."""
    width = len(labels[0])
    blocks = []
    for p in range(width):
        alphabet = sorted({lab[p] for lab in labels}, key=str)
        blocks.append(tuple(Row(f"{p}:{a}", tuple(1 if lab[p] == a else 0 for lab in labels)) for a in alphabet))
    return MultipartitionMatrix(tuple(columns), tuple(blocks))
