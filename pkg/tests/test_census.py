from itertools import permutations, product

import pytest

from quasitoric.census import all_supports, index_set_from_masks, supports_up_to_symmetry


def brute_classes(m, n):
    """Canonical form = lexicographically least cell set over all row/column relabelings."""
    cells = list(product(range(m), range(n)))
    seen = set()
    for mask in range(1, 1 << len(cells)):
        chosen = [c for b, c in enumerate(cells) if mask >> b & 1]
        if len({i for i, _ in chosen}) < m or len({j for _, j in chosen}) < n:
            continue
        seen.add(
            min(
                tuple(sorted((rp[i], cp[j]) for i, j in chosen))
                for rp in permutations(range(m))
                for cp in permutations(range(n))
            )
        )
    return seen


@pytest.mark.parametrize("m, n", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (3, 4)])
def test_counts_match_brute_force(m, n):
    assert len(supports_up_to_symmetry(m, n)) == len(brute_classes(m, n))


def test_classes_are_distinct_and_valid():
    reps = supports_up_to_symmetry(3, 3)
    forms = set()
    for masks in reps:
        S = index_set_from_masks(masks, 3)
        assert S.dims == (3, 3)
        forms.add(
            min(
                tuple(sorted((rp[i - 1], cp[j - 1]) for i, j in S))
                for rp in permutations(range(3))
                for cp in permutations(range(3))
            )
        )
    assert len(forms) == len(reps)


def test_all_supports_sizes():
    assert sum(1 for _ in all_supports(2, 2)) == 1 + 1 + 1 + 3
