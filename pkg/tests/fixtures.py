"""Shared index sets and small brute-force oracles used across the tests."""

from itertools import combinations, product

from quasitoric.model import IndexSet

STAIRCASE = IndexSet.from_tuples([(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)])
LEFT_FACTOR = IndexSet.from_tuples([(1, 1), (1, 3), (2, 1), (2, 2), (3, 3)])
RIGHT_FACTOR = IndexSet.from_tuples([(1, 1), (1, 3), (2, 1), (3, 2), (3, 3)])
GLUED_NINE = IndexSet.from_tuples(
    [(1, 1, 1), (1, 1, 3), (1, 3, 2), (1, 3, 3), (2, 1, 1), (2, 1, 3), (2, 2, 1), (3, 3, 2), (3, 3, 3)]
)
NO_SPLIT = IndexSet.from_tuples([(1, 2, 1), (1, 2, 2), (1, 1, 2), (2, 2, 2)])
FIVE_CLIQUES = IndexSet.from_tuples(
    [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 4), (2, 5), (3, 1), (3, 2), (4, 4), (4, 5), (5, 5)]
)
SMALL_TREE = IndexSet.from_tuples([(1, 1), (2, 1), (2, 2), (3, 1)])
SIX_CYCLE = IndexSet.from_tuples([(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 1)])


def full(m, n):
    return IndexSet((m, n), list(product(range(1, m + 1), range(1, n + 1))))


def cells(text):
    """'11 12 25' -> {(1,1),(1,2),(2,5)} (single-digit states)."""
    return frozenset((int(w[0]), int(w[1])) for w in text.split())


# short clique names for FIVE_CLIQUES, by content
D = {
    "D1": (frozenset({1}), frozenset({1, 2, 3})),
    "D2": (frozenset({2}), frozenset({1, 2, 4, 5})),
    "D3": (frozenset({1, 2, 3}), frozenset({1, 2})),
    "D4": (frozenset({2, 4}), frozenset({4, 5})),
    "D5": (frozenset({2, 4, 5}), frozenset({5})),
}


# golden reparametrized matrix of FIVE_CLIQUES, columns 11 12 13 21 22 24 25 31 32 44 45 55
GOLDEN_BAR = [
    [
        ("a_1", "111000000000"),
        ("a_2", "000111100000"),
        ("a_3", "000000011000"),
        ("a_4", "000000000110"),
        ("a_5", "000000000001"),
    ],
    [
        ("D1nD3", "110000000000"),
        ("D2nD3", "000110000000"),
        ("D2nD4", "000001100000"),
        ("b_3", "001000000000"),
        ("a_3", "000000011000"),
        ("a_4", "000000000110"),
        ("a_5", "000000000001"),
    ],
    [
        ("D4nD5", "000000100010"),
        ("b_1", "100100010000"),
        ("b_2", "010010001000"),
        ("b_3", "001000000000"),
        ("b_4", "000001000100"),
        ("a_5", "000000000001"),
    ],
    [
        ("b_1", "100100010000"),
        ("b_2", "010010001000"),
        ("b_3", "001000000000"),
        ("b_4", "000001000100"),
        ("b_5", "000000100011"),
    ],
]

MEET_NAMES = {"{1}x{1,2}": "D1nD3", "{2}x{1,2}": "D2nD3", "{2}x{4,5}": "D2nD4", "{2,4}x{5}": "D4nD5"}


def rename_meet(label):
    """Short names for the four meets of FIVE_CLIQUES's cliques."""
    return MEET_NAMES.get(label, label)


def brute_doubly_chordal(m, n, edges):
    """Search every induced vertex subset for a long cycle or a double square."""
    edges = set(edges)
    verts = [("a", i) for i in range(1, m + 1)] + [("b", j) for j in range(1, n + 1)]

    def adj(u, v):
        if u[0] == v[0]:
            return False
        i, j = (u[1], v[1]) if u[0] == "a" else (v[1], u[1])
        return (i, j) in edges

    for size in range(6, len(verts) + 1):
        for sub in combinations(verts, size):
            deg = {v: sum(adj(v, w) for w in sub if w != v) for v in sub}
            nedges = sum(deg.values()) // 2
            if not _connected(sub, adj):
                continue
            if all(d == 2 for d in deg.values()) and nedges == size:
                return False
            if size == 6 and nedges == 7 and sorted(deg.values()) == [2, 2, 2, 2, 3, 3]:
                left = sum(1 for v in sub if v[0] == "a")
                if left == 3:
                    return False
    return True


def _connected(sub, adj):
    seen, stack = {sub[0]}, [sub[0]]
    while stack:
        x = stack.pop()
        for y in sub:
            if y not in seen and adj(x, y):
                seen.add(y)
                stack.append(y)
    return len(seen) == len(sub)


def brute_maximal_cliques(S):
    """All maximal rectangles by scanning every nonempty row subset."""
    m, n = S.dims
    cellset = S.as_set()
    rects = set()
    for r in range(1, m + 1):
        for rows in combinations(range(1, m + 1), r):
            cols = frozenset(j for j in range(1, n + 1) if all((i, j) in cellset for i in rows))
            if cols:
                rects.add((frozenset(rows), cols))
    return {
        (R, C)
        for R, C in rects
        if not any((R, C) != (R2, C2) and R <= R2 and C <= C2 for R2, C2 in rects)
    }


def brute_is_ctfp(S, spec):
    """Glue the distinct projections back together and compare with S."""
    axes_a, axes_b = spec.axes_a(), spec.axes_b(S.k)
    A = {tuple(t[a - 1] for a in axes_a) for t in S}
    B = {tuple(t[b - 1] for b in axes_b) for t in S}
    pa, pb = axes_a.index(spec.j), axes_b.index(spec.j)
    rebuilt = set()
    for x in A:
        for y in B:
            if x[pa] != y[pb]:
                continue
            out = [0] * S.k
            for ax, v in zip(axes_a, x):
                out[ax - 1] = v
            for ax, v in zip(axes_b, y):
                out[ax - 1] = v
            rebuilt.add(tuple(out))
    return rebuilt == S.as_set()
