"""Enumeration of divisor families and machine-readable example records."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from multiprocessing import get_context
from typing import Callable, Iterable, Iterator

from .chern import BundleInvariants, bundle_invariants
from .involution import theta
from .lattice import N_GEN, N_NODES, DivisorClass, build_context, format_divisor
from .predicates import DEFAULT_BUDGET, CheckReport, theorem_check


class Family(str, Enum):
    NODES = "nodes"
    TROPES = "tropes"
    MIXED_DISJOINT = "mixed_disjoint"
    PROP_EX2_SHAPE = "prop_ex2_shape"
    ALL = "all"


@dataclass(frozen=True)
class SearchParams:
    family: Family = Family.NODES
    max_degree: int = 3
    max_coeff: int = 3
    budget: int = DEFAULT_BUDGET
    canonicalize: bool = False
    include_failures: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.max_coeff < 1:
            raise ValueError("max_coeff must be at least 1")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


@dataclass(frozen=True)
class ExampleRecord:
    divisor: str
    report: CheckReport
    invariants: BundleInvariants

    def as_json_dict(self) -> dict:
        r, inv = self.report, self.invariants
        witness = r.cond_ii.witness
        return {
            "divisor": self.divisor,
            "d2": inv.d2,
            "c1sq": inv.c1sq,
            "c2": inv.c2,
            "chi": inv.chi,
            "gap": inv.gap,
            "rho1": inv.rho1,
            "dim_m_lower": inv.dim_m_lower,
            "dim_p_upper": inv.dim_p_upper,
            "cond_i": r.cond_i.status,
            "cond_ii": r.cond_ii.status,
            "cond_ii_witness": None if witness is None else format_divisor(witness),
            "cond_iii": r.cond_iii,
            "pass": r.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json_dict(), separators=(", ", ": "))


CSV_FIELDS = ("divisor", "d2", "c1sq", "c2", "chi", "gap", "h0_lower", "dim_m_lower", "dim_p_upper", "rho1")


def csv_row(rec: ExampleRecord) -> str:
    d = rec.invariants.as_dict()
    return ",".join([f'"{rec.divisor}"'] + [str(d[k]) for k in CSV_FIELDS[1:]])


def make_record(d: DivisorClass, budget: int = DEFAULT_BUDGET) -> ExampleRecord:
    return ExampleRecord(format_divisor(d), theorem_check(d, budget), bundle_invariants(d))


# -- family membership and pruned enumeration --------------------------------


@lru_cache(maxsize=None)
def _incidence() -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(bool(x) for x in row) for row in build_context().gram.tolist())


def _meets(i: int, j: int) -> bool:
    return i != j and _incidence()[i][j]


def in_family(d: DivisorClass, family: Family) -> bool:
    """Membership test, independent of the enumeration below."""
    if not d.is_effective() or d.is_zero():
        return False
    nodes = [i for i in d.support if i < N_NODES]
    tropes = [i for i in d.support if i >= N_NODES]
    if family is Family.NODES:
        return not tropes
    if family is Family.TROPES:
        return not nodes
    if family is Family.ALL:
        return True
    disjoint = not any(_meets(i, t) for i in nodes for t in tropes)
    if family is Family.MIXED_DISJOINT:
        return bool(nodes) and bool(tropes) and disjoint
    return bool(nodes) and len(tropes) == 1 and d.coeffs[tropes[0]] == 1 and disjoint


def _coord_limit(family: Family, k: int, chosen: list[int], max_coeff: int) -> int:
    """Largest value coordinate ``k`` may take given the nonzero coordinates so far."""
    if family is Family.NODES and k >= N_NODES:
        return 0
    if family is Family.TROPES and k < N_NODES:
        return 0
    if family in (Family.MIXED_DISJOINT, Family.PROP_EX2_SHAPE) and k >= N_NODES:
        if any(_meets(i, k) for i in chosen):
            return 0
        if family is Family.PROP_EX2_SHAPE:
            if not chosen or chosen[-1] >= N_NODES:
                return 0
            return 1
    return max_coeff


def iter_family(family: Family | str, max_degree: int, max_coeff: int) -> Iterator[DivisorClass]:
    """All members of ``family`` with degree <= max_degree, in lexicographic order."""
    family = Family(family)
    vec = [0] * N_GEN
    chosen: list[int] = []

    def walk(k: int, left: int) -> Iterator[DivisorClass]:
        if k == N_GEN or left == 0:
            d = DivisorClass(tuple(vec))
            if in_family(d, family):
                yield d
            return
        if family in (Family.MIXED_DISJOINT, Family.PROP_EX2_SHAPE) and k == N_NODES and not chosen:
            return
        top = min(left, _coord_limit(family, k, chosen, max_coeff))
        for a in range(top + 1):
            vec[k] = a
            if a:
                chosen.append(k)
            yield from walk(k + 1, left - a)
            if a:
                chosen.pop()
        vec[k] = 0

    yield from walk(0, max_degree)


def _is_canonical(d: DivisorClass, family: Family) -> bool:
    t = theta(d)
    return not (in_family(t, family) and t.coeffs < d.coeffs)


def _record_for(args: tuple[DivisorClass, int]) -> ExampleRecord:
    d, budget = args
    return make_record(d, budget)


def enumerate_examples(params: SearchParams, jobs: int = 1) -> Iterator[ExampleRecord]:
    """Check every divisor of the family and yield records in lexicographic order.

    Only passing records are yielded unless ``params.include_failures``.
    """
    divisors: Iterable[DivisorClass] = iter_family(params.family, params.max_degree, params.max_coeff)
    if params.canonicalize:
        divisors = (d for d in divisors if _is_canonical(d, params.family))
    work = ((d, params.budget) for d in divisors)
    if jobs > 1:
        with get_context("spawn").Pool(jobs) as pool:
            # imap keeps input order, so the stream stays deterministic
            for rec in pool.imap(_record_for, work, chunksize=256):
                if params.include_failures or rec.report.passed:
                    yield rec
        return
    for item in work:
        rec = _record_for(item)
        if params.include_failures or rec.report.passed:
            yield rec


def write_records(records: Iterable[ExampleRecord], fmt: str, out: Callable[[str], None]) -> int:
    n = 0
    if fmt == "csv":
        out(",".join(CSV_FIELDS))
    for rec in records:
        if fmt == "json":
            out(rec.to_json())
        elif fmt == "csv":
            out(csv_row(rec))
        else:
            out(f"{rec.divisor}\t{rec.report.overall}\tD2={rec.invariants.d2}\tc1^2={rec.invariants.c1sq}\tc2={rec.invariants.c2}")
        n += 1
    return n
