"""Exact linear algebra over Q and Z.

Everything here works on plain lists of ``Fraction``/``int``.  Pivoting is
always leftmost-first so that certificates are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import DimensionMismatch
from .model import MultipartitionMatrix


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, MultipartitionMatrix):
        M = M.dense()
    return [[Fraction(x) for x in row] for row in M]


def _ncols(rows, fallback=0) -> int:
    return len(rows[0]) if rows else fallback


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = _as_rows(M)
    nrows, ncols = len(A), _ncols(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M) -> int:
    return len(rref(M)[1])


class RowSpace:
    """Cached elimination of a matrix for repeated rowspan queries.

    Solves ``c^T M = v`` by eliminating on the transpose; free coefficients
    are fixed to zero, so the certificate is the one with leftmost pivots.
    """

    def __init__(self, M):
        self.rows = _as_rows(M)
        self.nrows = len(self.rows)
        self.ncols = _ncols(self.rows)
        # eliminate [M^T | I], pivoting only on the M^T part; the right half
        # records the transform E with E M^T = rref(M^T)
        n, d = self.ncols, self.nrows
        W = [[self.rows[i][j] for i in range(d)] + [Fraction(int(k == j)) for k in range(n)] for j in range(n)]
        pivots = []
        r = 0
        for c in range(d):
            if r == n:
                break
            p = next((i for i in range(r, n) if W[i][c] != 0), None)
            if p is None:
                continue
            W[r], W[p] = W[p], W[r]
            inv = 1 / W[r][c]
            W[r] = [x * inv for x in W[r]]
            for i in range(n):
                if i != r and W[i][c] != 0:
                    f = W[i][c]
                    W[i] = [x - f * y for x, y in zip(W[i], W[r])]
            pivots.append(c)
            r += 1
        self.pivots = pivots
        self._E = [row[d:] for row in W]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, v: Sequence) -> list[Fraction] | None:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} against {self.ncols} columns")
        v = [Fraction(x) for x in v]
        Ev = [sum((e * x for e, x in zip(row, v) if e), Fraction(0)) for row in self._E]
        if any(Ev[self.rank:]):
            return None
        coeffs = [Fraction(0)] * self.nrows
        for i, c in enumerate(self.pivots):
            coeffs[c] = Ev[i]
        return coeffs

    def contains(self, v: Sequence) -> bool:
        return self.solve(v) is not None


def rowspan_contains(M, v: Sequence) -> tuple[bool, list[Fraction] | None]:
    """Whether ``v`` lies in the Q-rowspan of ``M``, with coefficients if so."""
    coeffs = RowSpace(M).solve(v)
    return coeffs is not None, coeffs


def combine_rows(M, coeffs: Sequence) -> list[Fraction]:
    rows = _as_rows(M)
    out = [Fraction(0)] * _ncols(rows)
    for c, row in zip(coeffs, rows):
        if c:
            out = [o + c * x for o, x in zip(out, row)]
    return out


def rowspan_equal(M1, M2) -> bool:
    r1, r2 = rank(M1), rank(M2)
    return r1 == r2 == rank(_as_rows(M1) + _as_rows(M2))


def mat_vec(M, v: Sequence) -> list:
    rows = M.dense() if isinstance(M, MultipartitionMatrix) else M
    if rows and len(rows[0]) != len(v):
        raise DimensionMismatch(f"matrix has {len(rows[0])} columns, vector has {len(v)}")
    return [sum(a * b for a, b in zip(row, v)) for row in rows]


def _primitive(vec: Sequence[Fraction]) -> list[int]:
    den = lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    first = next((x for x in ints if x), 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints


def _rational_kernel(M) -> list[list[int]]:
    rows = _as_rows(M)
    ncols = _ncols(rows, 0)
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(R, pivots):
            vec[p] = -row[f]
        basis.append(_primitive(vec))
    return basis


def _integer_echelon(rows: list[list[int]], ncols: int) -> int:
    """Unimodular row reduction of the first ``ncols`` columns, in place.

    Returns the rank; rows past the rank are zero on those columns.
    """
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if any(rows[i][c] for i in range(r, len(rows))):
            r += 1
    return r


def hermite_normal_form(rows: list[list[int]]) -> list[list[int]]:
    """Row-style HNF; the nonzero rows are a canonical basis of the row lattice."""
    H = [list(map(int, row)) for row in rows]
    if not H:
        return []
    ncols = len(H[0])
    rk = _integer_echelon(H, ncols)
    H = H[:rk]
    for r, row in enumerate(H):
        c = next(j for j, x in enumerate(row) if x)
        if row[c] < 0:
            H[r] = row = [-x for x in row]
        for i in range(r):
            q = H[i][c] // row[c]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], row)]
    return H


def _lattice_kernel(M) -> list[list[int]]:
    A = M.dense() if isinstance(M, MultipartitionMatrix) else [list(map(int, r)) for r in M]
    d = len(A)
    n = len(A[0]) if A else 0
    W = [[A[i][j] for i in range(d)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    rk = _integer_echelon(W, d)
    return [row[d:] for row in W[rk:]]


def in_lattice(basis: Sequence[Sequence[int]], w: Sequence[int]) -> bool:
    """Whether ``w`` is an integer combination of the (independent) ``basis``."""
    if not basis:
        return all(x == 0 for x in w)
    coeffs = RowSpace(basis).solve(w)
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def integer_kernel_basis(M) -> list[list[int]]:
    """A lattice basis of ker_Z(M).

    Prefers the primitive-cleared rational basis (readable vectors) when it
    already generates the saturated kernel lattice; otherwise falls back to
    the Hermite normal form of a unimodular-transform basis.
    """
    rational = _rational_kernel(M)
    if not rational:
        return []
    lattice = _lattice_kernel(M)
    if all(in_lattice(rational, w) for w in lattice):
        basis = rational
    else:
        basis = [_primitive([Fraction(x) for x in row]) for row in hermite_normal_form(lattice)]
    return sorted(basis)


def binomial_in_ideal(M, u: Sequence[int], v: Sequence[int]) -> bool:
    """x^u - x^v lies in the toric ideal of M iff M u = M v."""
    if any(x < 0 for x in u) or any(x < 0 for x in v):
        raise ValueError("binomial exponents must be nonnegative")
    return mat_vec(M, u) == mat_vec(M, v)


def is_homogeneous_wrt(M, grading_rows: Sequence[Sequence]) -> bool:
    """Whether the toric ideal of ``M`` is homogeneous for the given grading.

    Equivalent to every grading row lying in the Q-rowspan of ``M``.
    """
    space = RowSpace(M)
    return all(space.contains(g) for g in grading_rows)


def fraction_strings(vec: Sequence) -> list[str]:
    return [str(Fraction(x)) for x in vec]
