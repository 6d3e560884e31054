"""Enumeration of small 2-way supports up to row and column permutation.

A support on ``[m] x [n]`` is a multiset of nonzero row bitmasks.  Two
supports are equivalent when a column permutation maps one multiset onto the
other, so the canonical code is the minimum, over column permutations, of
the sorted permuted masks packed into one integer.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, permutations

import numpy as np

from .model import IndexSet


def _permuted_masks(n: int) -> np.ndarray:
    """table[p, mask] = mask with bits moved by the p-th column permutation."""
    perms = list(permutations(range(n)))
    masks = np.arange(1 << n)
    table = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for p, perm in enumerate(perms):
        out = np.zeros_like(masks)
        for src, dst in enumerate(perm):
            out |= ((masks >> src) & 1) << dst
        table[p] = out
    return table


def supports_up_to_symmetry(m: int, n: int) -> list[tuple[int, ...]]:
    """Canonical row-mask tuples for all supports without empty rows or columns."""
    full = (1 << n) - 1
    rows = np.array(list(combinations_with_replacement(range(1, full + 1), m)), dtype=np.int64)
    covered = np.bitwise_or.reduce(rows, axis=1) == full
    rows = rows[covered]
    if len(rows) == 0:
        return []
    table = _permuted_masks(n)
    best = None
    for p in range(table.shape[0]):
        permuted = np.sort(table[p][rows], axis=1)
        code = np.zeros(len(rows), dtype=np.int64)
        for c in range(m):
            code = (code << n) | permuted[:, c]
        best = code if best is None else np.minimum(best, code)
    out = []
    for code in np.unique(best):
        masks = []
        code = int(code)
        for _ in range(m):
            masks.append(code & full)
            code >>= n
        out.append(tuple(reversed(masks)))
    return out


def index_set_from_masks(masks: tuple[int, ...], n: int) -> IndexSet:
    cells = [(i + 1, j + 1) for i, mask in enumerate(masks) for j in range(n) if mask >> j & 1]
    return IndexSet((len(masks), n), cells)


def all_supports(max_m: int, max_n: int):
    """Yield every support with m <= max_m, n <= max_n, once per symmetry class."""
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            for masks in supports_up_to_symmetry(m, n):
                yield index_set_from_masks(masks, n)
