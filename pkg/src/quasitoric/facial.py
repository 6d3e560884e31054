"""Two-way slices of k-way models and the slice necessary condition.

Fixing every coordinate except axes ``a`` and ``b`` cuts out a 2-way model
that is a face of the ambient model.  If any nonempty slice lacks rational
MLE, so does the ambient model; the converse fails (no-3-way interaction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .chordal import LEFT, ChordalityWitness, ml_degree_one_2way
from .errors import DimensionMismatch, InvalidIndexSet
from .model import IndexSet, build_a_matrix, trim

PASSED_NOTICE = "necessary condition passed, NOT sufficient (known ML-degree 3 counterexample)"

# no-3-way interaction on three binary variables, pairs (x, y) coded as 2(x-1)+y
NO_THREE_WAY = IndexSet(
    (4, 4, 4),
    [(1, 1, 1), (1, 2, 2), (2, 1, 3), (2, 2, 4), (3, 3, 1), (3, 4, 2), (4, 3, 3), (4, 4, 4)],
)


def no_three_way_design() -> list[list[int]]:
    """The 12x8 design of the no-3-way model: (x1,x2), (x1,x3), (x2,x3) margins."""
    cells = list(product((1, 2), repeat=3))
    rows = []
    for p, q in ((0, 1), (0, 2), (1, 2)):
        for s, t in product((1, 2), repeat=2):
            rows.append([1 if (c[p], c[q]) == (s, t) else 0 for c in cells])
    return rows


def _others(k: int, a: int, b: int) -> list[int]:
    return [x for x in range(1, k + 1) if x not in (a, b)]


@dataclass(frozen=True)
class Slice:
    a: int
    b: int
    fixed: tuple  # states on the other axes, in increasing axis order
    pairs: frozenset
    trimmed: IndexSet | None = None
    maps: tuple = ()

    @property
    def empty(self) -> bool:
        return not self.pairs

    def original_vertex(self, v) -> str:
        """Name a trimmed-graph vertex by its original state."""
        side, idx = v
        axis = 0 if side == LEFT else 1
        inverse = {new: old for old, new in self.maps[axis].items()}
        return f"{'a' if side == LEFT else 'b'}{inverse[idx]}"


def _validate(S: IndexSet, a: int, b: int, fixed: tuple | None = None) -> None:
    if S.k < 3:
        raise DimensionMismatch(f"slices need k >= 3, got k={S.k}")
    if a == b or not (1 <= a <= S.k and 1 <= b <= S.k):
        raise InvalidIndexSet(f"invalid axis pair ({a}, {b})")
    if fixed is not None:
        others = _others(S.k, a, b)
        if len(fixed) != len(others):
            raise InvalidIndexSet(f"need {len(others)} fixed states, got {len(fixed)}")
        for axis, s in zip(others, fixed):
            if not 1 <= s <= S.dims[axis - 1]:
                raise InvalidIndexSet(f"state {s} out of range on axis {axis}")


def slice_at(S: IndexSet, a: int, b: int, fixed) -> Slice:
    fixed = tuple(fixed)
    _validate(S, a, b, fixed)
    others = _others(S.k, a, b)
    pairs = frozenset(
        (t[a - 1], t[b - 1]) for t in S if all(t[x - 1] == s for x, s in zip(others, fixed))
    )
    if not pairs:
        return Slice(a, b, fixed, pairs)
    trimmed, maps = trim(pairs)
    return Slice(a, b, fixed, pairs, trimmed, tuple(maps))


def face_functional(S: IndexSet, a: int, b: int, fixed) -> list[int]:
    """0/1 weights on the rows of A_S: 1 on the fixed state of each other axis."""
    fixed = tuple(fixed)
    _validate(S, a, b, fixed)
    chosen = dict(zip(_others(S.k, a, b), fixed))
    weights = []
    for axis, d in enumerate(S.dims, start=1):
        weights += [1 if chosen.get(axis) == s else 0 for s in range(1, d + 1)]
    return weights


def face_functional_check(S: IndexSet, a: int, b: int, fixed) -> bool:
    """The functional attains k-2 exactly on the slice columns and less elsewhere."""
    sl = slice_at(S, a, b, fixed)
    w = face_functional(S, a, b, fixed)
    A = build_a_matrix(S).dense()
    values = [sum(wr * row[c] for wr, row in zip(w, A)) for c in range(len(S))]
    others = _others(S.k, a, b)
    for t, v in zip(S, values):
        in_slice = all(t[x - 1] == s for x, s in zip(others, sl.fixed))
        if in_slice != (v == S.k - 2) or v > S.k - 2:
            return False
    return True


@dataclass(frozen=True)
class SliceVerdict:
    slice: Slice
    doubly_chordal: bool | None  # None for empty slices
    witness: ChordalityWitness | None = None

    def to_dict(self) -> dict:
        out = {
            "axes": [self.slice.a, self.slice.b],
            "fixed": list(self.slice.fixed),
            "pairs": sorted(list(p) for p in self.slice.pairs),
            "empty": self.slice.empty,
            "doubly_chordal": self.doubly_chordal,
        }
        if self.witness is not None:
            out["witness"] = {
                "kind": self.witness.kind,
                "vertices": [self.slice.original_vertex(v) for v in self.witness.vertices],
            }
        return out


@dataclass
class SliceReport:
    passed: bool
    verdicts: list = field(default_factory=list)
    failure: SliceVerdict | None = None

    @property
    def notice(self) -> str:
        if self.passed:
            return PASSED_NOTICE
        s = self.failure.slice
        return f"slice on axes ({s.a},{s.b}) at {list(s.fixed)} lacks rational MLE: ML-degree > 1"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "notice": self.notice,
            "slices": [v.to_dict() for v in self.verdicts],
            "failure": self.failure.to_dict() if self.failure else None,
        }


def slices_necessary_condition(S: IndexSet) -> SliceReport:
    """Check rational MLE on every nonempty slice; first failure is the witness."""
    if S.k < 3:
        raise DimensionMismatch(f"slices need k >= 3, got k={S.k}")
    report = SliceReport(True)
    for a in range(1, S.k + 1):
        for b in range(a + 1, S.k + 1):
            ranges = [range(1, S.dims[x - 1] + 1) for x in _others(S.k, a, b)]
            for fixed in product(*ranges):
                sl = slice_at(S, a, b, fixed)
                if sl.empty:
                    report.verdicts.append(SliceVerdict(sl, None))
                    continue
                result = ml_degree_one_2way(sl.trimmed)
                verdict = SliceVerdict(sl, result.ok, result.witness)
                report.verdicts.append(verdict)
                if not result.ok and report.failure is None:
                    report.passed = False
                    report.failure = verdict
    return report
