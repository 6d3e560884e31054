"""Index sets, star matrices and multipartition matrices.

An :class:`IndexSet` is the set ``S`` of k-tuples that specifies a k-way
quasi-independence model.  States are 1-based everywhere in this package,
matching the usual notation, and tuples are kept in lexicographic order so
that matrix columns have a single canonical order.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidIndexSet


def axis_letter(axis: int) -> str:
    """Row-label prefix for a 0-based axis: a, b, c, ..."""
    if axis < 26:
        return string.ascii_lowercase[axis]
    return f"x{axis + 1}"


@dataclass(frozen=True)
class IndexSet:
    dims: tuple[int, ...]
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        raw = [tuple(int(x) for x in t) for t in self.tuples]
        if not dims or any(d < 1 for d in dims):
            raise InvalidIndexSet(f"dims must be positive integers, got {list(dims)}")
        k = len(dims)
        if len(set(raw)) != len(raw):
            raise InvalidIndexSet("tuples must be pairwise distinct")
        for t in raw:
            if len(t) != k:
                raise InvalidIndexSet(f"tuple {t} does not have {k} coordinates")
            for axis, (s, d) in enumerate(zip(t, dims)):
                if not 1 <= s <= d:
                    raise InvalidIndexSet(f"tuple {t}: state {s} out of range 1..{d} on axis {axis + 1}")
        for axis, d in enumerate(dims):
            used = {t[axis] for t in raw}
            if len(used) != d:
                missing = sorted(set(range(1, d + 1)) - used)
                raise InvalidIndexSet(
                    f"axis {axis + 1}: states {missing} are unused (use trim() to renumber)"
                )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "tuples", tuple(sorted(raw)))
        object.__setattr__(self, "_position", {t: p for p, t in enumerate(self.tuples)})

    @classmethod
    def from_tuples(cls, tuples: Iterable[Sequence[int]]) -> "IndexSet":
        """Build an index set whose dims are the per-axis maxima."""
        tuples = [tuple(t) for t in tuples]
        if not tuples:
            raise InvalidIndexSet("an index set needs at least one tuple")
        k = len(tuples[0])
        dims = tuple(max(t[a] for t in tuples) for a in range(k))
        return cls(dims, tuples)

    @property
    def k(self) -> int:
        return len(self.dims)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t) -> bool:
        return tuple(t) in self._position

    def position(self, t) -> int:
        """Column position of tuple ``t`` in the lexicographic order."""
        return self._position[tuple(t)]

    def as_set(self) -> frozenset:
        return frozenset(self.tuples)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "tuples": [list(t) for t in self.tuples]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "IndexSet":
        try:
            dims = data["dims"]
            tuples = data["tuples"]
        except (KeyError, TypeError) as exc:
            raise InvalidIndexSet(f"index set JSON needs 'dims' and 'tuples': {exc}") from None
        if not isinstance(dims, list) or not isinstance(tuples, list):
            raise InvalidIndexSet("'dims' and 'tuples' must be arrays")
        for t in tuples:
            if not isinstance(t, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in t):
                raise InvalidIndexSet(f"tuple entries must be integer arrays, got {t!r}")
        return cls(tuple(dims), [tuple(t) for t in tuples])

    @classmethod
    def from_json(cls, text: str) -> "IndexSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidIndexSet(f"malformed JSON: {exc}") from None
        return cls.from_dict(data)


def trim(tuples: Iterable[Sequence[int]]) -> tuple[IndexSet, list[dict[int, int]]]:
    """Renumber states so that every state on every axis is used.

    Returns the trimmed index set and, per axis, the map old state -> new state.
    Relative order of states is preserved.
    """
    tuples = [tuple(t) for t in tuples]
    if not tuples:
        raise InvalidIndexSet("cannot trim an empty set of tuples")
    k = len(tuples[0])
    maps = []
    for axis in range(k):
        used = sorted({t[axis] for t in tuples})
        maps.append({old: new for new, old in enumerate(used, start=1)})
    renumbered = {tuple(maps[a][t[a]] for a in range(k)) for t in tuples}
    dims = tuple(len(m) for m in maps)
    return IndexSet(dims, renumbered), maps


def labelled_index_set(label_tuples: Iterable[Sequence]) -> tuple[IndexSet, list[list]]:
    """Encode tuples of arbitrary sortable labels as an integer index set.

    Labels on each axis are numbered in sorted order; returns the index set
    and, per axis, the list of labels (state ``s`` is ``labels[axis][s - 1]``).
    Duplicate label tuples collapse.
    """
    label_tuples = [tuple(t) for t in label_tuples]
    k = len(label_tuples[0])
    alphabets = [sorted({t[a] for t in label_tuples}) for a in range(k)]
    lookup = [{lab: s for s, lab in enumerate(alpha, start=1)} for alpha in alphabets]
    encoded = {tuple(lookup[a][t[a]] for a in range(k)) for t in label_tuples}
    return IndexSet(tuple(len(a) for a in alphabets), encoded), alphabets


@dataclass(frozen=True)
class StarMatrix:
    m: int
    n: int
    support: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        support = tuple(tuple(bool(x) for x in row) for row in self.support)
        if len(support) != self.m or any(len(row) != self.n for row in support):
            raise DimensionMismatch(f"support grid is not {self.m}x{self.n}")
        for i, row in enumerate(support):
            if not any(row):
                raise InvalidIndexSet(f"row {i + 1} of the star matrix is empty")
        for j in range(self.n):
            if not any(row[j] for row in support):
                raise InvalidIndexSet(f"column {j + 1} of the star matrix is empty")
        object.__setattr__(self, "support", support)

    def __str__(self) -> str:
        return "\n".join(" ".join("*" if x else "0" for x in row) for row in self.support)


def star_matrix(S: IndexSet) -> StarMatrix:
    if S.k != 2:
        raise DimensionMismatch(f"star matrices need a 2-way index set, got k={S.k}")
    m, n = S.dims
    cells = S.as_set()
    grid = tuple(tuple((i, j) in cells for j in range(1, n + 1)) for i in range(1, m + 1))
    return StarMatrix(m, n, grid)


def from_star(M: StarMatrix) -> IndexSet:
    cells = [(i + 1, j + 1) for i, row in enumerate(M.support) for j, x in enumerate(row) if x]
    return IndexSet((M.m, M.n), cells)


@dataclass(frozen=True)
class Row:
    label: str
    entries: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    checks: dict = field(default_factory=dict)
    # (1-based block, column label) of the first offending column
    failure: tuple | None = None
    message: str = ""


@dataclass(frozen=True)
class MultipartitionMatrix:
    """0/1 matrix in labelled row blocks; columns carry tuple labels.

    Duplicate column labels are allowed.  Construction does not enforce the
    one-1-per-column-per-block invariant; use :func:`validate_multipartition`.
    """

    columns: tuple
    blocks: tuple[tuple[Row, ...], ...]

    def __post_init__(self):
        columns = tuple(self.columns)
        blocks = tuple(
            tuple(r if isinstance(r, Row) else Row(r[0], tuple(r[1])) for r in block)
            for block in self.blocks
        )
        for block in blocks:
            for row in block:
                if len(row.entries) != len(columns):
                    raise DimensionMismatch(
                        f"row {row.label} has {len(row.entries)} entries for {len(columns)} columns"
                    )
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "blocks", blocks)

    @property
    def shape(self) -> tuple[int, int]:
        return sum(len(b) for b in self.blocks), len(self.columns)

    def rows(self) -> list[Row]:
        return [row for block in self.blocks for row in block]

    def dense(self) -> list[list[int]]:
        return [list(row.entries) for row in self.rows()]

    def labels(self) -> list[str]:
        return [row.label for row in self.rows()]

    def block_assignment(self) -> list[list[int]]:
        """For each block, the row index (within the block) covering each column.

        Only meaningful for valid multipartition matrices.
        """
        out = []
        for block in self.blocks:
            owner = [-1] * len(self.columns)
            for r, row in enumerate(block):
                for c, x in enumerate(row.entries):
                    if x:
                        owner[c] = r
            out.append(owner)
        return out

    def to_dict(self) -> dict:
        return {
            "columns": [list(c) if isinstance(c, tuple) else c for c in self.columns],
            "blocks": [
                {"rows": [{"label": r.label, "entries": list(r.entries)} for r in block]}
                for block in self.blocks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "MultipartitionMatrix":
        columns = [tuple(c) if isinstance(c, list) else c for c in data["columns"]]
        blocks = [
            [Row(r["label"], tuple(r["entries"])) for r in block["rows"]] for block in data["blocks"]
        ]
        return cls(tuple(columns), tuple(tuple(b) for b in blocks))

    def __str__(self) -> str:
        width = max((len(r.label) for r in self.rows()), default=0)
        lines = []
        for b, block in enumerate(self.blocks):
            if b:
                lines.append("-" * (width + 2 * len(self.columns) + 1))
            for row in block:
                lines.append(f"{row.label:>{width}} " + " ".join(str(x) for x in row.entries))
        return "\n".join(lines)


def build_a_matrix(S: IndexSet) -> MultipartitionMatrix:
    """The canonical A-matrix of the quasi-independence model of ``S``.

    Block ``l`` has one row per state of axis ``l``; the column of tuple ``t``
    has a 1 in row ``t[l]`` of every block.
    """
    blocks = []
    for axis, d in enumerate(S.dims):
        letter = axis_letter(axis)
        rows = []
        for state in range(1, d + 1):
            entries = tuple(1 if t[axis] == state else 0 for t in S.tuples)
            rows.append(Row(f"{letter}_{state}", entries))
        blocks.append(tuple(rows))
    return MultipartitionMatrix(S.tuples, tuple(blocks))


def validate_multipartition(M: MultipartitionMatrix) -> ValidationReport:
    checks = {"zero-one": True, "one-per-column": True, "disjoint-supports": True}
    failure = None
    message = ""
    for b, block in enumerate(M.blocks, start=1):
        for c, col in enumerate(M.columns):
            column = [row.entries[c] for row in block]
            if any(x not in (0, 1) for x in column):
                checks["zero-one"] = False
            total = sum(column)
            if total != 1:
                checks["one-per-column"] = False
                if total > 1:
                    checks["disjoint-supports"] = False
                if failure is None:
                    failure = (b, col)
                    message = f"block {b}, column {col}: column sum {total} != 1"
    # the all-ones vector is the row sum of each valid block
    checks["ones-in-rowspan"] = checks["one-per-column"] and checks["zero-one"]
    passed = all(checks.values())
    return ValidationReport(passed, checks, failure, message)
