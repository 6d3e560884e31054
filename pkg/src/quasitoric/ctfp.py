"""Coordinate toric fiber products of index sets.

A j-coordinate split routes the axes in ``inA`` to a first factor and the
axes ``([k] - inA) | {j}`` to a second; both keep axis ``j``.  ``S`` is a
coordinate TFP along that split exactly when, inside every class of tuples
sharing a state on axis ``j``, the tuples form the full product of their
first-factor and second-factor projections.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations

from .errors import ConditionFailed, DimensionMismatch, InvalidSplit
from .model import IndexSet


@dataclass(frozen=True)
class SplitSpec:
    j: int
    inA: frozenset

    def __post_init__(self):
        object.__setattr__(self, "inA", frozenset(int(a) for a in self.inA))

    def validate(self, k: int) -> None:
        if not 1 <= self.j <= k:
            raise InvalidSplit(f"shared axis {self.j} outside 1..{k}")
        if not self.inA <= set(range(1, k + 1)):
            raise InvalidSplit(f"inA {sorted(self.inA)} is not a subset of 1..{k}")
        if self.j not in self.inA:
            raise InvalidSplit(f"inA {sorted(self.inA)} must contain the shared axis {self.j}")
        if self.inA == {self.j}:
            raise InvalidSplit("the first factor needs an axis besides the shared one")
        if self.inA == set(range(1, k + 1)):
            raise InvalidSplit("the second factor needs an axis besides the shared one")

    def axes_a(self) -> tuple[int, ...]:
        return tuple(sorted(self.inA))

    def axes_b(self, k: int) -> tuple[int, ...]:
        return tuple(sorted((set(range(1, k + 1)) - self.inA) | {self.j}))

    def to_dict(self) -> dict:
        return {"j": self.j, "inA": sorted(self.inA)}

    @classmethod
    def from_dict(cls, data: dict) -> "SplitSpec":
        return cls(int(data["j"]), frozenset(data["inA"]))

    def __str__(self) -> str:
        return f"j={self.j}, inA={{{','.join(map(str, sorted(self.inA)))}}}"


def _project(t, axes):
    return tuple(t[a - 1] for a in axes)


def _join(A, B, axes_a, axes_b, k):
    out = [0] * k
    for a, x in zip(axes_a, A):
        out[a - 1] = x
    for b, x in zip(axes_b, B):
        out[b - 1] = x
    return tuple(out)


def split(S: IndexSet, spec: SplitSpec) -> tuple[Counter, Counter]:
    """The multisets of first- and second-factor projections of ``S``."""
    spec.validate(S.k)
    axes_a, axes_b = spec.axes_a(), spec.axes_b(S.k)
    first = Counter(_project(t, axes_a) for t in S)
    second = Counter(_project(t, axes_b) for t in S)
    return first, second


def _classes(multiset: Counter, position: int) -> dict:
    classes = defaultdict(dict)
    for x, count in multiset.items():
        classes[x[position]][x] = count
    return classes


def equal_multiplicity_condition(S: IndexSet, spec: SplitSpec) -> bool:
    """Elements sharing the j-state have equal multiplicity, in both multisets.

    Necessary for a cTFP but not sufficient: ``{(1,1,1), (2,1,2)}`` with
    ``j=2, inA={1,2}`` passes while the swap test fails.  Kept for comparison
    with :func:`check_frequency_condition`.
    """
    first, second = split(S, spec)
    pa = spec.axes_a().index(spec.j)
    pb = spec.axes_b(S.k).index(spec.j)
    for multiset, pos in ((first, pa), (second, pb)):
        for members in _classes(multiset, pos).values():
            if len(set(members.values())) > 1:
                return False
    return True


def check_frequency_condition(S: IndexSet, spec: SplitSpec) -> bool:
    """Frequency form of the cTFP criterion.

    Within each j-class, every first-factor element must occur exactly as
    often as there are distinct second-factor elements in that class, and
    symmetrically.  This is the counting identity that a glued product
    forces on the multisets.
    """
    first, second = split(S, spec)
    pa = spec.axes_a().index(spec.j)
    pb = spec.axes_b(S.k).index(spec.j)
    classes_a = _classes(first, pa)
    classes_b = _classes(second, pb)
    for state in classes_a:
        members_a, members_b = classes_a[state], classes_b[state]
        if any(c != len(members_b) for c in members_a.values()):
            return False
        if any(c != len(members_a) for c in members_b.values()):
            return False
    return True


@dataclass(frozen=True)
class SwapCheck:
    ok: bool
    # (s1, s2, missing tuple) for the first violation in lexicographic order
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_swap_condition(S: IndexSet, spec: SplitSpec) -> SwapCheck:
    spec.validate(S.k)
    k = S.k
    axes_a, axes_b = spec.axes_a(), spec.axes_b(k)
    by_state = defaultdict(list)
    for t in S:
        by_state[t[spec.j - 1]].append(t)
    cells = S.as_set()
    for t in S:
        for u in by_state[t[spec.j - 1]]:
            if u <= t:
                continue
            for left, right in ((t, u), (u, t)):
                cross = _join(_project(left, axes_a), _project(right, axes_b), axes_a, axes_b, k)
                if cross not in cells:
                    return SwapCheck(False, (t, u, cross))
    return SwapCheck(True)


@dataclass(frozen=True)
class CTFPFactorization:
    spec: SplitSpec
    S1: IndexSet
    S2: IndexSet
    shared_states: int
    source_k: int

    @property
    def j1(self) -> int:
        """Position (1-based) of the shared axis inside S1."""
        return self.spec.axes_a().index(self.spec.j) + 1

    @property
    def j2(self) -> int:
        return self.spec.axes_b(self.source_k).index(self.spec.j) + 1

    def combine(self, a: tuple, b: tuple) -> tuple:
        """The source tuple assembled from a first- and second-factor tuple."""
        return _join(a, b, self.spec.axes_a(), self.spec.axes_b(self.source_k), self.source_k)

    def project(self, t: tuple) -> tuple[tuple, tuple]:
        return _project(t, self.spec.axes_a()), _project(t, self.spec.axes_b(self.source_k))

    def reassemble(self) -> IndexSet:
        j1, j2 = self.j1 - 1, self.j2 - 1
        by_state = defaultdict(list)
        for b in self.S2:
            by_state[b[j2]].append(b)
        tuples = {self.combine(a, b) for a in self.S1 for b in by_state[a[j1]]}
        return IndexSet.from_tuples(tuples)

    def predicted_ml_degree(self) -> int | None:
        """1 when both factors are 2-way with rational MLE; None if undetermined.

        ML-degrees multiply under the TFP, so two ML-degree-1 factors give a
        degree-1 product.  Factors of other shapes are not predicted here.
        """
        from .chordal import ml_degree_one_2way

        if self.S1.k != 2 or self.S2.k != 2:
            return None
        if ml_degree_one_2way(self.S1) and ml_degree_one_2way(self.S2):
            return 1
        return None

    def to_dict(self) -> dict:
        return {"spec": self.spec.to_dict(), "S1": self.S1.to_dict(), "S2": self.S2.to_dict()}


def factorize(S: IndexSet, spec: SplitSpec) -> CTFPFactorization:
    check = check_swap_condition(S, spec)
    if not check:
        s1, s2, missing = check.witness
        raise ConditionFailed(f"{spec}: {s1} and {s2} are in S but {missing} is not", check.witness)
    axes_a, axes_b = spec.axes_a(), spec.axes_b(S.k)
    S1 = IndexSet(_project(S.dims, axes_a), {_project(t, axes_a) for t in S})
    S2 = IndexSet(_project(S.dims, axes_b), {_project(t, axes_b) for t in S})
    return CTFPFactorization(spec, S1, S2, S.dims[spec.j - 1], S.k)


@dataclass(frozen=True)
class Glued:
    S: IndexSet
    # per result axis: ("S1", axis) / ("S2", axis) / ("shared", (j1, j2)), 1-based
    provenance: tuple


def glue(S1: IndexSet, j1: int, S2: IndexSet, j2: int) -> Glued:
    """Coordinate TFP of two index sets along axis j1 of S1 and j2 of S2.

    Result axes are: S1's axes other than j1, the shared axis, S2's axes
    other than j2.
    """
    if not (1 <= j1 <= S1.k and 1 <= j2 <= S2.k):
        raise InvalidSplit("shared axis out of range")
    if S1.dims[j1 - 1] != S2.dims[j2 - 1]:
        raise DimensionMismatch(
            f"shared axis sizes differ: {S1.dims[j1 - 1]} vs {S2.dims[j2 - 1]}"
        )
    rest1 = [a for a in range(1, S1.k + 1) if a != j1]
    rest2 = [a for a in range(1, S2.k + 1) if a != j2]
    by_state = defaultdict(list)
    for b in S2:
        by_state[b[j2 - 1]].append(b)
    tuples = set()
    for a in S1:
        shared = a[j1 - 1]
        head = _project(a, rest1)
        for b in by_state[shared]:
            tuples.add(head + (shared,) + _project(b, rest2))
    dims = _project(S1.dims, rest1) + (S1.dims[j1 - 1],) + _project(S2.dims, rest2)
    provenance = tuple(("S1", a) for a in rest1) + (("shared", (j1, j2)),) + tuple(("S2", b) for b in rest2)
    return Glued(IndexSet(dims, tuples), provenance)


def canonical_splits(k: int) -> list[SplitSpec]:
    """All j-coordinate splits, one per unordered {inA, inB} pair, in (j, inA) order."""
    specs = []
    for j in range(1, k + 1):
        others = [a for a in range(1, k + 1) if a != j]
        anchor = others[0]
        for size in range(1, len(others)):
            for chosen in combinations(others, size):
                if anchor in chosen:
                    specs.append(SplitSpec(j, frozenset(chosen) | {j}))
    return sorted(specs, key=lambda s: (s.j, sorted(s.inA)))


def find_ctfp(S: IndexSet) -> list[tuple[SplitSpec, CTFPFactorization]]:
    if S.k < 3:
        raise InvalidSplit(f"cTFP search needs k >= 3, got k={S.k}")
    return [(spec, factorize(S, spec)) for spec in canonical_splits(S.k) if check_swap_condition(S, spec)]
