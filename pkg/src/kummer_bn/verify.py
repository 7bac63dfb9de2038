"""Self-verification of the lattice data and the closed-form criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .chern import bundle_invariants
from .involution import is_theta_invariant, theta
from .lattice import (
    INDEX,
    N_GEN,
    N_NODES,
    NODES,
    THETA_PAIRS,
    TROPES,
    DivisorClass,
    build_context,
    gram_rank,
    pair,
)
from .predicates import (
    corollary_closed_form,
    h0_one_certificate,
    no_invariant_subdivisor,
    prop_ex2_closed_form,
    prop_ex2_divisor,
    verify_peeling,
)
from .search import Family, iter_family


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "") for c in self.checks]


def prop_ex2_cases(max_nodes: int = 3, max_coeff: int = 3):
    """Yield ``(nodes, trope)`` for every admissible shape ``sum a_i E_i + T``."""
    g = build_context().gram
    for t in TROPES:
        free = [e.index for e in NODES if g[e.index, t.index] == 0]
        for r in range(1, max_nodes + 1):
            for idx in combinations(free, r):
                for coeffs in product(range(1, max_coeff + 1), repeat=r):
                    yield dict(zip(idx, coeffs)), t.index


def closed_form_mismatches(max_nodes: int = 3, max_coeff: int = 3) -> tuple[int, int]:
    """Return ``(cases, mismatches)`` of the closed forms against brute force."""
    cases = bad = 0
    for nodes, t in prop_ex2_cases(max_nodes, max_coeff):
        d = prop_ex2_divisor(nodes, t)
        cases += 1
        ok = prop_ex2_closed_form(nodes, t) == (not is_theta_invariant(d))
        ok &= corollary_closed_form(nodes, t) == (no_invariant_subdivisor(d).status == "holds")
        bad += not ok
    return cases, bad


def single_family_failures(family: Family, max_degree: int) -> tuple[int, int]:
    """Node-only (or trope-only) sums: (i) and (ii) always hold, degree >= 3 gives (iii)."""
    cases = bad = 0
    for d in iter_family(family, max_degree, max_degree):
        cases += 1
        cert = h0_one_certificate(d)
        ok = cert.certified and verify_peeling(d, cert.peeling_order)
        ok &= no_invariant_subdivisor(d).status == "holds"
        if d.degree >= 3:
            ok &= pair(d, d) < -4
        bad += not ok
    return cases, bad


def parity_failures(max_support: int = 3, max_coeff: int = 2) -> tuple[int, int]:
    cases = bad = 0
    for r in range(1, max_support + 1):
        for idx in combinations(range(N_GEN), r):
            for coeffs in product(range(1, max_coeff + 1), repeat=r):
                d = DivisorClass.from_terms(zip(idx, coeffs))
                cases += 1
                bad += pair(d, theta(d)) % 2 != 0
    return cases, bad


def verify_configuration(quick: bool = False) -> VerificationReport:
    ctx = build_context()
    g = np.asarray(ctx.gram)
    p = np.array(ctx.theta_perm)
    rep = VerificationReport()

    node_counts = (g[:N_NODES, N_NODES:] == 1).sum(axis=1)
    trope_counts = (g[N_NODES:, :N_NODES] == 1).sum(axis=1)
    rep.add("(16_6) configuration", (node_counts == 6).all() and (trope_counts == 6).all(),
            f"node rows {sorted(set(node_counts.tolist()))}, trope rows {sorted(set(trope_counts.tolist()))}")
    rep.add("Gram symmetric", (g == g.T).all())
    rep.add("Gram even (diagonal -2)", (np.diag(g) == -2).all())
    rep.add("families internally disjoint",
            not (g[:N_NODES, :N_NODES] + 2 * np.eye(N_NODES, dtype=int)).any()
            and not (g[N_NODES:, N_NODES:] + 2 * np.eye(N_NODES, dtype=int)).any())
    rep.add("theta involutive", (p[p] == np.arange(N_GEN)).all())
    rep.add("theta isometry", (g[np.ix_(p, p)] == g).all())
    rep.add("theta table", all(p[INDEX[e]] == INDEX[t] for e, t in THETA_PAIRS))
    rank = gram_rank(ctx)
    rep.add("Gram rank 17", rank == 17, f"rank {rank}")
    rep.add("theta isometry spot entry", pair(theta(DivisorClass.curve("E0")), theta(DivisorClass.curve("T1"))) == 1)

    cases, bad = parity_failures(2 if quick else 3)
    rep.add("D.theta(D) even", bad == 0, f"{cases} divisors")
    sample = [d for d in iter_family(Family.ALL, 2, 2)]
    rep.add("invariants theta-symmetric",
            all(bundle_invariants(d) == bundle_invariants(theta(d)) for d in sample), f"{len(sample)} divisors")

    cases, bad = closed_form_mismatches(2 if quick else 3, 2 if quick else 3)
    rep.add("closed forms agree with brute force", bad == 0, f"{cases} cases, {bad} mismatches")
    for fam in (Family.NODES, Family.TROPES):
        cases, bad = single_family_failures(fam, 3 if quick else 4)
        rep.add(f"{fam.value} sums satisfy (i)-(iii)", bad == 0, f"{cases} divisors, {bad} failures")
    return rep
