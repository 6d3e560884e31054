"""Likelihood, Birch residuals and iterative proportional scaling.

Counts and distributions are sequences aligned with the columns of a
multipartition matrix.  The exact path runs on ``Fraction``; the float path
uses numpy and stops on the scaled Birch residual.
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ctfp import CTFPFactorization
from .errors import DimensionMismatch, QuasitoricError
from .model import IndexSet, MultipartitionMatrix


class ZeroMarginal(QuasitoricError, ZeroDivisionError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


def _check_len(M: MultipartitionMatrix, v: Sequence, what: str) -> None:
    if len(v) != len(M.columns):
        raise DimensionMismatch(f"{what} has {len(v)} entries for {len(M.columns)} columns")


def log_likelihood(p: Sequence, u: Sequence) -> float:
    if len(p) != len(u):
        raise DimensionMismatch(f"distribution has {len(p)} entries, counts have {len(u)}")
    total = 0.0
    for ps, us in zip(p, u):
        if us == 0:
            continue
        if ps == 0:
            return -math.inf
        total += float(us) * math.log(ps)
    return total


def birch_residual(M: MultipartitionMatrix, u: Sequence, p: Sequence) -> list:
    """``M u - u_+ M p``, exact when the inputs are rational."""
    _check_len(M, u, "counts")
    _check_len(M, p, "distribution")
    total = sum(u)
    out = []
    for row in M.rows():
        mu = sum(x for x, e in zip(u, row.entries) if e)
        mp = sum(x for x, e in zip(p, row.entries) if e)
        out.append(mu - total * mp)
    return out


def max_abs(vec: Sequence):
    return max((abs(x) for x in vec), default=0)


@dataclass(frozen=True)
class IPSConfig:
    max_cycles: int = 10000
    tolerance: float = 1e-10
    block_order: tuple | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be at least 1")


@dataclass(frozen=True)
class MLEResult:
    distribution: tuple
    cycles: int
    birch_residual_max_abs: object
    exact: bool
    converged: bool = True

    def to_dict(self) -> dict:
        if self.exact:
            dist = [str(x) for x in self.distribution]
            res = str(self.birch_residual_max_abs)
        else:
            dist = [f"{x:.12g}" for x in self.distribution]
            res = f"{self.birch_residual_max_abs:.12g}"
        return {
            "distribution": dist,
            "cycles": self.cycles,
            "birch_residual_max_abs": res,
            "exact": self.exact,
            "converged": self.converged,
        }


def _block_order(M: MultipartitionMatrix, order) -> list[int]:
    return list(range(len(M.blocks))) if order is None else list(order)


def ips_cycle_exact(M: MultipartitionMatrix, u: Sequence, p: list, order=None) -> list:
    """One full cycle of block updates in rational arithmetic."""
    total = sum(u)
    p = list(p)
    for b in _block_order(M, order):
        for row in M.blocks[b]:
            support = [c for c, e in enumerate(row.entries) if e]
            current = sum(p[c] for c in support)
            if current == 0:
                raise ZeroMarginal(f"block {b + 1}, row {row.label}: current marginal is zero", row.label)
            factor = Fraction(sum(u[c] for c in support)) / total / current
            for c in support:
                p[c] *= factor
    return p


def ips_one_cycle(M: MultipartitionMatrix, u: Sequence, order=None) -> list[Fraction]:
    """Exactly one IPS cycle from the uniform start; the caller checks Birch."""
    _check_len(M, u, "counts")
    u = [Fraction(x) for x in u]
    if any(x < 0 for x in u) or sum(u) <= 0:
        raise ValueError("counts must be nonnegative with a positive total")
    start = [Fraction(1, len(u))] * len(u)
    return ips_cycle_exact(M, u, start, order)


def ips_exact_result(M: MultipartitionMatrix, u: Sequence, order=None) -> MLEResult:
    p = ips_one_cycle(M, u, order)
    residual = max_abs(birch_residual(M, [Fraction(x) for x in u], p))
    return MLEResult(tuple(p), 1, residual, True, residual == 0)


def ips_run(M: MultipartitionMatrix, u: Sequence, config: IPSConfig | None = None) -> MLEResult:
    """Float IPS from the uniform start until the Birch residual is small."""
    config = config or IPSConfig()
    _check_len(M, u, "counts")
    uu = np.asarray([float(x) for x in u])
    total = uu.sum()
    if total <= 0 or (uu < 0).any():
        raise ValueError("counts must be nonnegative with a positive total")
    if (uu == 0).any():
        warnings.warn("zero counts: the MLE may not exist; running best-effort", stacklevel=2)
    owners = [np.asarray(o) for o in M.block_assignment()]
    dense = np.asarray(M.dense(), dtype=float)
    order = _block_order(M, config.block_order)
    targets = {b: np.bincount(owners[b], weights=uu, minlength=len(M.blocks[b])) / total for b in order}
    p = np.full(len(uu), 1.0 / len(uu))
    residual = math.inf
    cycles = 0
    while cycles < config.max_cycles:
        cycles += 1
        for b in order:
            current = np.bincount(owners[b], weights=p, minlength=len(M.blocks[b]))
            with np.errstate(divide="ignore", invalid="ignore"):
                factor = np.where(current > 0, targets[b] / current, 0.0)
            p = p * factor[owners[b]]
        residual = float(np.abs(dense @ uu - total * (dense @ p)).max())
        if residual < config.tolerance * total:
            return MLEResult(tuple(p.tolist()), cycles, residual, False, True)
    return MLEResult(tuple(p.tolist()), cycles, residual, False, False)


def marginal_counts(u: Sequence, S: IndexSet, fact: CTFPFactorization) -> tuple[list, list]:
    """Counts of ``S`` pushed forward onto the two factors of ``fact``."""
    c1, c2 = defaultdict(lambda: 0), defaultdict(lambda: 0)
    for t, x in zip(S.tuples, u):
        a, b = fact.project(t)
        c1[a] += x
        c2[b] += x
    return [c1[a] for a in fact.S1.tuples], [c2[b] for b in fact.S2.tuples]


def tfp_mle_combine(p1: Sequence, p2: Sequence, fact: CTFPFactorization, check_tol: float | None = 1e-8) -> dict:
    """Combine factor MLEs into the MLE of the glued model.

    Returns ``{tuple: probability}`` over the reassembled index set.  The
    shared-state marginal is taken from the first factor; when ``check_tol``
    is set, the second factor's marginal must agree with it.
    """
    if len(p1) != len(fact.S1) or len(p2) != len(fact.S2):
        raise DimensionMismatch("factor distributions do not match the factor index sets")
    j1, j2 = fact.j1 - 1, fact.j2 - 1
    d1, d2 = defaultdict(lambda: 0), defaultdict(lambda: 0)
    for a, x in zip(fact.S1.tuples, p1):
        d1[a[j1]] += x
    for b, x in zip(fact.S2.tuples, p2):
        d2[b[j2]] += x
    if check_tol is not None:
        for i in d1:
            if abs(d1[i] - d2[i]) > check_tol:
                raise ValueError(f"factor marginals disagree at shared state {i}: {d1[i]} vs {d2[i]}")
    q1 = dict(zip(fact.S1.tuples, p1))
    q2 = dict(zip(fact.S2.tuples, p2))
    by_state = defaultdict(list)
    for b in fact.S2.tuples:
        by_state[b[j2]].append(b)
    out = {}
    for a in fact.S1.tuples:
        i = a[j1]
        if d1[i] == 0:
            raise ZeroMarginal(f"shared state {i} has zero marginal", i)
        for b in by_state[i]:
            out[fact.combine(a, b)] = q1[a] * q2[b] / d1[i]
    return out


def model_point(M: MultipartitionMatrix, theta: Sequence[float]) -> list[float]:
    """Normalized image of the monomial map with row parameters ``theta``."""
    dense = np.asarray(M.dense(), dtype=float)
    logs = np.log(np.asarray(theta, dtype=float)) @ dense
    w = np.exp(logs - logs.max())
    return (w / w.sum()).tolist()
