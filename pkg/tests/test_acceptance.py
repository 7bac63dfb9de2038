"""Exit criteria, one test per criterion; each prints a PASS/FAIL line."""

import json
import subprocess
import sys
from collections import Counter
from math import comb

import numpy as np

from kummer_bn.chern import bundle_invariants
from kummer_bn.involution import is_theta_invariant, theta
from kummer_bn.lattice import LABELS, N_NODES, DivisorClass, build_context, gram_rank, parse_divisor, self_int
from kummer_bn.predicates import (
    corollary_closed_form,
    h0_one_certificate,
    no_invariant_subdivisor,
    prop_ex2_closed_form,
    prop_ex2_divisor,
    theorem_check,
    verify_peeling,
)
from kummer_bn.search import Family, SearchParams, enumerate_examples, iter_family
from kummer_bn.verify import prop_ex2_cases

from .conftest import ACCEPTANCE_LINES
from .oracles import THETA_TABLE, oracle_pair, oracle_theta_vec
from .test_chern import coefficient_two_sweep

P = parse_divisor


def record(number, title, failures):
    ok = not failures
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                            + ("" if ok else f" -- {failures[:5]}"))
    assert ok, failures


def test_1_lattice_sanity():
    g = build_context().gram
    failures = []
    if not (g == g.T).all():
        failures.append("asymmetric")
    rng = np.random.default_rng(0)
    for v in rng.integers(-9, 10, size=(200, 32)):
        if int(v @ g @ v) % 2:
            failures.append(f"odd square {v}")
    counts = list((g[:N_NODES, N_NODES:] == 1).sum(axis=1)) + list((g[N_NODES:, :N_NODES] == 1).sum(axis=1))
    if counts != [6] * 32:
        failures.append(f"incidences {counts}")
    if gram_rank() != 17:
        failures.append(f"rank {gram_rank()}")
    record(1, "symmetric, even, (16_6), rank 17", failures)


def test_2_involution():
    ctx = build_context()
    g, p = ctx.gram, np.array(ctx.theta_perm)
    failures = []
    for k in range(32):
        e = DivisorClass.curve(k)
        if theta(theta(e)) != e:
            failures.append(f"theta^2 {LABELS[k]}")
    perm = np.zeros((32, 32), dtype=int)
    perm[p, np.arange(32)] = 1
    if not (perm.T @ g @ perm == g).all():
        failures.append("not an isometry")
    for node, trope in THETA_TABLE.items():
        if theta(P(node)) != P(trope) or theta(P(trope)) != P(node):
            failures.append(f"{node}<->{trope}")
    if len(THETA_TABLE) != 16:
        failures.append("table size")
    record(2, "theta involutive isometry swapping the 16 table pairs", failures)


def test_3_golden_examples():
    failures = []
    for expr in ("E0 + E13 + E13", "3E23 + E14 + 2E56"):
        if theorem_check(P(expr)).overall != "pass":
            failures.append(expr)
    if not is_theta_invariant(P("E12 + T3")):
        failures.append("E12+T3 invariant")
    for expr in ("2E12 + T3", "E12 + E14 + T3"):
        if is_theta_invariant(P(expr)):
            failures.append(f"{expr} not invariant")
    r = theorem_check(P("E0"))
    if r.overall != "fail" or bundle_invariants(P("E0")).gap != 1:
        failures.append("E0")
    if corollary_closed_form({"E12": 2}, "T3") is not False:
        failures.append("corollary")
    if no_invariant_subdivisor(P("2E12 + T3")).witness != P("E12 + T3"):
        failures.append("witness")
    record(3, "golden examples", failures)


def test_4_closed_form_equivalence():
    failures = []
    n = 0
    for nodes, t in prop_ex2_cases(max_nodes=3, max_coeff=3):
        n += 1
        d = prop_ex2_divisor(nodes, t)
        if prop_ex2_closed_form(nodes, t) != (not is_theta_invariant(d)):
            failures.append(("prop", str(d)))
        if corollary_closed_form(nodes, t) != (no_invariant_subdivisor(d).status == "holds"):
            failures.append(("cor", str(d)))
    # 16 tropes, 10 disjoint nodes each
    if n != 16 * (10 * 3 + 45 * 9 + 120 * 27):
        failures.append(f"case count {n}")
    record(4, f"closed forms vs brute force on {n} cases", failures)


def test_5_node_and_trope_sums():
    failures = []
    for fam in (Family.NODES, Family.TROPES):
        for d in iter_family(fam, 5, 5):
            cert = h0_one_certificate(d)
            if not (cert.certified and verify_peeling(d, cert.peeling_order)):
                failures.append(("h0", str(d)))
            if no_invariant_subdivisor(d).status != "holds":
                failures.append(("ii", str(d)))
            if d.degree >= 3 and not self_int(d) < -4:
                failures.append(("iii", str(d)))
    record(5, "node/trope sums of degree <= 5 satisfy (i), (ii), and degree >= 3 => (iii)", failures)


def test_6_chern_arithmetic():
    failures = []
    d = P("E0 + E12 + E13")
    v = list(d.coeffs)
    d2 = oracle_pair(v, v)
    cross = oracle_pair(v, oracle_theta_vec(v))
    expected = {"d2": -6, "c1sq": 0, "c2": 3, "chi": -1, "gap": 3, "dim_m_lower": 9, "dim_p_upper": 8, "rho1": 7}
    rederived = {"d2": d2, "c1sq": d2 + cross, "c2": cross // 2, "chi": d2 // 2 + 2, "gap": -d2 // 2,
                 "dim_m_lower": 2 * cross - (d2 + cross) - 3, "dim_p_upper": 3 * (cross // 2) - (d2 + cross) // 2 - 1}
    rederived["rho1"] = rederived["dim_m_lower"] - (1 - rederived["chi"])
    got = {k: v for k, v in bundle_invariants(d).as_dict().items() if k in expected}
    if not (got == expected == rederived):
        failures.append((got, rederived))
    n = 0
    for d in coefficient_two_sweep(2):
        n += 1
        inv = bundle_invariants(d)
        if inv.gap != -inv.d2 // 2 or inv.d2 % 2 or (inv.c1sq - inv.d2) % 2:
            failures.append(("gap", str(d)))
        if inv != bundle_invariants(theta(d)):
            failures.append(("theta", str(d)))
    record(6, f"Chern data of E0+E12+E13 and sweep of {n} divisors", failures)


def test_7_proof_arithmetic():
    failures = []
    checked = 0
    for fam, deg in ((Family.NODES, 6), (Family.TROPES, 6), (Family.PROP_EX2_SHAPE, 6), (Family.MIXED_DISJOINT, 4)):
        for rec in enumerate_examples(SearchParams(fam, deg, deg)):
            checked += 1
            inv = rec.invariants
            if not (inv.dim_m_lower > inv.dim_p_upper and inv.gap > 2):
                failures.append(rec.divisor)
    if not checked:
        failures.append("nothing enumerated")
    record(7, f"dim_m_lower > dim_p_upper and gap > 2 on {checked} passing divisors", failures)


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "kummer_bn", *args], capture_output=True, check=True).stdout


def test_8_determinism():
    failures = []
    first = _cli("enumerate", "--family", "nodes", "--max-degree", "4")
    second = _cli("enumerate", "--family", "nodes", "--max-degree", "4")
    if first != second or not first:
        failures.append("outputs differ")
    full = _cli("enumerate", "--family", "nodes", "--max-degree", "4", "--max-coeff", "4", "--include-failures")
    per_degree = Counter(sum(P(json.loads(line)["divisor"]).coeffs) for line in full.decode().splitlines())
    if per_degree != {n: comb(16 + n - 1, n) for n in range(1, 5)}:
        failures.append(dict(per_degree))
    record(8, "byte-identical enumeration; multiset counts C(16+n-1, n)", failures)
