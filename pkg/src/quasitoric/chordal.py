"""Bipartite graphs of 2-way models and doubly-chordal recognition.

A 2-way model has ML-degree one exactly when its bipartite graph has no
induced cycle of length >= 6 and no induced double square (two 4-cycles
sharing an edge).  Both searches return a concrete witness on failure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, InvalidIndexSet
from .model import IndexSet

LEFT, RIGHT = 0, 1


def vertex_name(v: tuple[int, int]) -> str:
    side, idx = v
    return f"{'a' if side == LEFT else 'b'}{idx}"


@dataclass(frozen=True)
class BipartiteGraph:
    m: int
    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (1 <= i <= self.m and 1 <= j <= self.n):
                raise InvalidIndexSet(f"edge {(i, j)} outside [{self.m}]x[{self.n}]")
        if {i for i, _ in edges} != set(range(1, self.m + 1)) or {j for _, j in edges} != set(
            range(1, self.n + 1)
        ):
            raise InvalidIndexSet("bipartite graph has an isolated vertex")
        object.__setattr__(self, "edges", edges)
        adj = {v: set() for v in self.vertices()}
        for i, j in edges:
            adj[(LEFT, i)].add((RIGHT, j))
            adj[(RIGHT, j)].add((LEFT, i))
        object.__setattr__(self, "_adj", {v: frozenset(nb) for v, nb in adj.items()})

    def vertices(self) -> list[tuple[int, int]]:
        return [(LEFT, i) for i in range(1, self.m + 1)] + [(RIGHT, j) for j in range(1, self.n + 1)]

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def adjacent(self, u, v) -> bool:
        return v in self._adj[u]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def components(self) -> list[list[tuple[int, int]]]:
        seen, comps = set(), []
        for v in self.vertices():
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_forest(self) -> bool:
        return len(self.edges) == self.m + self.n - len(self.components())


def build_graph(S: IndexSet) -> BipartiteGraph:
    if S.k != 2:
        raise DimensionMismatch(f"bipartite graphs need a 2-way index set, got k={S.k}")
    return BipartiteGraph(S.dims[0], S.dims[1], S.as_set())


@dataclass(frozen=True)
class ChordalityWitness:
    kind: str  # "induced-cycle" or "double-square"
    vertices: tuple

    def describe(self) -> str:
        return f"{self.kind}: " + " ".join(vertex_name(v) for v in self.vertices)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": [vertex_name(v) for v in self.vertices]}


@dataclass(frozen=True)
class ChordalityResult:
    ok: bool
    witness: ChordalityWitness | None = None

    def __bool__(self) -> bool:
        return self.ok


def _find_double_square(G: BipartiteGraph) -> ChordalityWitness | None:
    for i, j in sorted(G.edges):
        x, y = (LEFT, i), (RIGHT, j)
        ys = sorted(G.neighbors(x) - {y})
        xs = sorted(G.neighbors(y) - {x})
        for a1 in xs:
            for b1 in ys:
                if not G.adjacent(a1, b1):
                    continue
                for a2 in xs:
                    if a2 == a1 or G.adjacent(a2, b1):
                        continue
                    for b2 in ys:
                        if b2 == b1 or G.adjacent(a1, b2) or not G.adjacent(a2, b2):
                            continue
                        # squares x-b1-a1-y and x-b2-a2-y share the edge x-y
                        return ChordalityWitness("double-square", (x, y, a1, b1, a2, b2))
    return None


def _find_long_induced_cycle(G: BipartiteGraph, min_length: int = 6) -> ChordalityWitness | None:
    order = G.vertices()
    rank = {v: r for r, v in enumerate(sorted(order))}

    def extend(path, on_path):
        last = path[-1]
        start = path[0]
        for w in sorted(G.neighbors(last)):
            if rank[w] <= rank[start] or w in on_path:
                continue
            # w may touch only `last` among the interior of the path
            if any(G.adjacent(w, p) for p in path[1:-1]):
                continue
            if G.adjacent(w, start):
                if len(path) + 1 >= min_length and len(path) >= 3:
                    return path + [w]
                continue
            found = extend(path + [w], on_path | {w})
            if found:
                return found
        return None

    for v in sorted(order):
        for w in sorted(G.neighbors(v)):
            if rank[w] <= rank[v]:
                continue
            cycle = extend([v, w], {v, w})
            if cycle:
                return ChordalityWitness("induced-cycle", tuple(cycle))
    return None


def is_doubly_chordal_bipartite(G: BipartiteGraph) -> ChordalityResult:
    witness = _find_double_square(G) or _find_long_induced_cycle(G)
    if witness is not None:
        if not verify_witness(G, witness):
            raise AssertionError(f"witness failed re-verification: {witness.describe()}")
        return ChordalityResult(False, witness)
    return ChordalityResult(True)


def verify_witness(G: BipartiteGraph, witness: ChordalityWitness) -> bool:
    """Re-induce the witness vertices and confirm the forbidden subgraph."""
    vs = list(witness.vertices)
    if len(set(vs)) != len(vs):
        return False
    induced = {(u, v) for a, u in enumerate(vs) for v in vs[a + 1:] if G.adjacent(u, v)}
    deg = {v: sum(1 for e in induced if v in e) for v in vs}
    if witness.kind == "induced-cycle":
        if len(vs) < 6 or len(induced) != len(vs):
            return False
        return all(G.adjacent(vs[p], vs[(p + 1) % len(vs)]) for p in range(len(vs)))
    if witness.kind == "double-square":
        if len(vs) != 6 or len(induced) != 7:
            return False
        return sorted(deg.values()) == [2, 2, 2, 2, 3, 3] and G.adjacent(vs[0], vs[1])
    return False


def ml_degree_one_2way(S: IndexSet) -> ChordalityResult:
    """Rational-MLE test for a 2-way model via its bipartite graph."""
    return is_doubly_chordal_bipartite(build_graph(S))
