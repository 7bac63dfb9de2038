"""Hypotheses of the Brill-Noether non-emptiness criterion.

For an effective divisor ``D`` on the Kummer surface the criterion asks for

(i)   h^0(O(D)) = 1, certified here by a peeling order;
(ii)  no nonzero effective subdivisor ``D'`` with ``theta(D') ~ D'``;
(iii) D.D < -4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Literal, Mapping

import numpy as np

from .involution import is_theta_invariant, theta_index
from .lattice import (
    COEFF_LIMIT,
    N_GEN,
    N_NODES,
    DivisorClass,
    LatticeContext,
    LatticeError,
    _index_of,
    build_context,
    self_int,
)

DEFAULT_BUDGET = 2**20


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int) -> None:
        super().__init__(f"{count} subdivisors exceed the budget of {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class H0Certificate:
    status: Literal["certified", "unknown"]
    peeling_order: tuple[int, ...] | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"


@dataclass(frozen=True)
class SubdivisorVerdict:
    status: Literal["holds", "fails", "budget"]
    witness: DivisorClass | None = None


@dataclass(frozen=True)
class CheckReport:
    cond_i: H0Certificate
    cond_ii: SubdivisorVerdict
    cond_iii: bool
    self_int: int
    overall: Literal["pass", "fail", "unknown"]

    @property
    def passed(self) -> bool:
        return self.overall == "pass"


def _require_effective_nonzero(d: DivisorClass) -> None:
    if not d.is_effective():
        raise LatticeError(f"divisor is not effective: {d}")
    if d.is_zero():
        raise LatticeError("divisor is zero")


def h0_one_certificate(d: DivisorClass, ctx: LatticeContext | None = None) -> H0Certificate:
    """Search for an order C_1, ..., C_n of the curves of ``d`` (with multiplicity)
    such that each C_k meets C_1 + ... + C_{k-1} non-positively.

    Such an order gives h^1(O_{D_k}) = 0 step by step, hence h^0(O(d)) = 1.
    The search removes a last curve at a time, depth first, and remembers
    remainders that admit no order. ``unknown`` means no order exists, which
    does not decide h^0.
    """
    _require_effective_nonzero(d)
    ctx = build_context() if ctx is None else ctx
    supp = d.support
    rows = [[ctx.rows[i][j] for j in supp] for i in supp]
    start = tuple(d.coeffs[i] for i in supp)

    def candidates(v: tuple[int, ...]) -> Iterator[int]:
        for p, a in enumerate(v):
            # C . (v - C) = C . v + 2 for a (-2)-curve
            if a and sum(x * y for x, y in zip(rows[p], v)) + 2 <= 0:
                yield p

    failed: set[tuple[int, ...]] = set()
    removed: list[int] = []
    frames = [(start, candidates(start))]
    while frames:
        v, it = frames[-1]
        if sum(v) == 1:
            first = supp[v.index(1)]
            return H0Certificate("certified", (first, *(supp[p] for p in reversed(removed))))
        for p in it:
            w = v[:p] + (v[p] - 1,) + v[p + 1:]
            if w not in failed:
                removed.append(p)
                frames.append((w, candidates(w)))
                break
        else:
            failed.add(v)
            frames.pop()
            if removed:
                removed.pop()
    return H0Certificate("unknown")


def verify_peeling(d: DivisorClass, order: tuple[int, ...], ctx: LatticeContext | None = None) -> bool:
    """Re-check a peeling order against the raw Gram entries."""
    ctx = build_context() if ctx is None else ctx
    g = ctx.rows
    counts = [0] * N_GEN
    for k, c in enumerate(order):
        if k and sum(g[c][j] * counts[j] for j in range(N_GEN)) > 0:
            return False
        counts[c] += 1
    return tuple(counts) == d.coeffs


def subdivisor_count(d: DivisorClass) -> int:
    return math.prod(a + 1 for a in d.coeffs if a) - 1


def subdivisors(d: DivisorClass, budget: int = DEFAULT_BUDGET) -> Iterator[DivisorClass]:
    """Every nonzero ``d'`` with ``0 <= d' <= d``, in lexicographic order."""
    _require_effective_nonzero(d)
    count = subdivisor_count(d)
    if count + 1 > budget:
        raise BudgetExceeded(count, budget)
    return _subdivisors(d)


def _subdivisors(d: DivisorClass) -> Iterator[DivisorClass]:
    supp = d.support
    digits = product(*(range(d.coeffs[i] + 1) for i in supp))
    next(digits)  # the zero vector
    for ds in digits:
        v = [0] * N_GEN
        for i, a in zip(supp, ds):
            v[i] = a
        yield DivisorClass(tuple(v))


@lru_cache(maxsize=8)
def _antiinvariance_matrix(ctx: LatticeContext) -> np.ndarray:
    """G(I - P): an integer vector x is theta-invariant iff this kills x."""
    perm = np.zeros((N_GEN, N_GEN), dtype=np.int64)
    for j, pj in enumerate(ctx.theta_perm):
        perm[pj, j] = 1
    m = ctx.gram - ctx.gram @ perm
    m.flags.writeable = False
    return m


_CHUNK = 1 << 15


@lru_cache(maxsize=4096)
def _digit_block(shape: tuple[int, ...], lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the mixed-radix counter over ``shape`` (lexicographic)."""
    flat = np.arange(lo, hi)
    out = np.stack(np.unravel_index(flat, shape), axis=1).astype(np.int64)
    out.flags.writeable = False
    return out


def no_invariant_subdivisor(
    d: DivisorClass,
    budget: int = DEFAULT_BUDGET,
    ctx: LatticeContext | None = None,
) -> SubdivisorVerdict:
    """Brute force over subdivisors; the first invariant one is the witness."""
    _require_effective_nonzero(d)
    ctx = build_context() if ctx is None else ctx
    total = subdivisor_count(d) + 1
    if total > budget:
        return SubdivisorVerdict("budget")
    if max(d.coeffs) > COEFF_LIMIT:
        raise OverflowError(f"coefficient above {COEFF_LIMIT} in {d}")
    supp = d.support
    shape = tuple(d.coeffs[i] + 1 for i in supp)
    cols = _antiinvariance_matrix(ctx)[:, supp].T
    for lo in range(0, total, _CHUNK):
        digits = _digit_block(shape, lo, min(total, lo + _CHUNK))
        hits = np.flatnonzero(~(digits @ cols).any(axis=1))
        if lo == 0:
            hits = hits[hits > 0]
        if hits.size:
            v = [0] * N_GEN
            for i, a in zip(supp, digits[hits[0]].tolist()):
                v[i] = a
            return SubdivisorVerdict("fails", DivisorClass(tuple(v)))
    return SubdivisorVerdict("holds")


def no_invariant_subdivisor_naive(
    d: DivisorClass,
    budget: int = DEFAULT_BUDGET,
    ctx: LatticeContext | None = None,
) -> SubdivisorVerdict:
    """Same verdict as :func:`no_invariant_subdivisor`, one equivalence test at a time."""
    try:
        subs = subdivisors(d, budget)
    except BudgetExceeded:
        return SubdivisorVerdict("budget")
    for sub in subs:
        if is_theta_invariant(sub, ctx):
            return SubdivisorVerdict("fails", sub)
    return SubdivisorVerdict("holds")


def _prop_ex2_input(
    nodes: Mapping[str | int, int], trope: str | int, ctx: LatticeContext
) -> tuple[dict[int, int], int]:
    if not nodes:
        raise LatticeError("node set must be nonempty")
    t = _index_of(trope)
    if t < N_NODES:
        raise LatticeError(f"{trope} is not a trope")
    out: dict[int, int] = {}
    for key, a in nodes.items():
        i = _index_of(key)
        if i >= N_NODES:
            raise LatticeError(f"{key} is not a node")
        if i in out:
            raise LatticeError(f"node {key} listed twice")
        if a <= 0:
            raise LatticeError(f"coefficient of {key} must be positive")
        if ctx.gram[i, t]:
            raise LatticeError(f"node {key} meets trope {trope}")
        out[i] = int(a)
    return out, t


def prop_ex2_divisor(nodes: Mapping[str | int, int], trope: str | int) -> DivisorClass:
    return DivisorClass.from_terms([*nodes.items(), (trope, 1)])


def prop_ex2_closed_form(
    nodes: Mapping[str | int, int], trope: str | int, ctx: LatticeContext | None = None
) -> bool:
    """True iff ``sum a_i E_i + T`` is not theta-invariant, for nodes disjoint from T.

    The only invariant case is ``D = theta(T) + T``.
    """
    ctx = build_context() if ctx is None else ctx
    coeffs, t = _prop_ex2_input(nodes, trope, ctx)
    partner = theta_index(t, ctx)
    if partner not in coeffs:
        return True
    return coeffs[partner] >= 2 or len(coeffs) > 1


def corollary_closed_form(
    nodes: Mapping[str | int, int], trope: str | int, ctx: LatticeContext | None = None
) -> bool:
    """True iff ``sum a_i E_i + T`` has no invariant nonzero effective subdivisor."""
    ctx = build_context() if ctx is None else ctx
    coeffs, t = _prop_ex2_input(nodes, trope, ctx)
    return theta_index(t, ctx) not in coeffs


def theorem_check(
    d: DivisorClass, budget: int = DEFAULT_BUDGET, ctx: LatticeContext | None = None
) -> CheckReport:
    _require_effective_nonzero(d)
    ctx = build_context() if ctx is None else ctx
    d2 = self_int(d, ctx)
    cond_iii = d2 < -4
    cond_ii = no_invariant_subdivisor(d, budget, ctx)
    if cond_ii.status == "budget":
        # the peeling search visits the same state space
        cond_i = H0Certificate("unknown")
    else:
        cond_i = h0_one_certificate(d, ctx)
    if not cond_iii or cond_ii.status == "fails":
        overall = "fail"
    elif cond_i.certified and cond_ii.status == "holds":
        overall = "pass"
    else:
        overall = "unknown"
    return CheckReport(cond_i, cond_ii, cond_iii, d2, overall)


__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "H0Certificate",
    "SubdivisorVerdict",
    "CheckReport",
    "h0_one_certificate",
    "verify_peeling",
    "subdivisor_count",
    "subdivisors",
    "no_invariant_subdivisor",
    "no_invariant_subdivisor_naive",
    "prop_ex2_divisor",
    "prop_ex2_closed_form",
    "corollary_closed_form",
    "theorem_check",
]
