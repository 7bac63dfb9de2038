import numpy as np
import pytest
from hypothesis import given, strategies as st

from kummer_bn.lattice import (
    BASIS,
    LABELS,
    N_NODES,
    DivisorClass,
    ParseError,
    build_context,
    equiv,
    format_divisor,
    gram_csv,
    gram_rank,
    integer_rank,
    pair,
    parse_divisor,
    self_int,
)

from .oracles import LABELS as ORACLE_LABELS, oracle_gram, rational_rank

P = parse_divisor

vectors = st.lists(st.integers(-5, 5), min_size=32, max_size=32).map(lambda v: DivisorClass(tuple(v)))
effective = st.lists(st.integers(0, 4), min_size=32, max_size=32).map(lambda v: DivisorClass(tuple(v)))


def test_basis_order_and_kinds():
    assert LABELS == tuple(ORACLE_LABELS)
    assert len(BASIS) == 32
    assert [g.kind.value for g in BASIS] == ["node"] * 16 + ["trope"] * 16
    assert [g.index for g in BASIS] == list(range(32))


def test_gram_matches_lemma_table():
    assert build_context().gram.tolist() == oracle_gram()


@pytest.mark.parametrize("a, b, value", [
    ("E0", "T1", 1),
    ("E0", "E0", -2),
    ("E12", "T456", 1),
    ("E12", "T3", 0),
    ("E0", "T126", 0),
    ("E12", "T1", 1),
    ("E12", "T126", 1),
    ("E13", "T126", 0),
])
def test_gram_entries(a, b, value):
    assert build_context().entry(a, b) == value


def test_gram_is_read_only():
    with pytest.raises(ValueError):
        build_context().gram[0, 0] = 5


def test_sixteen_six_configuration():
    g = build_context().gram
    assert ((g[:N_NODES, N_NODES:] == 1).sum(axis=1) == 6).all()
    assert ((g[N_NODES:, :N_NODES] == 1).sum(axis=1) == 6).all()


@pytest.mark.parametrize("a, b, value", [
    ("E0", "T3", 1),
    ("E0 + E12 + E13", "T456 + T3 + T2", 6),
    ("E0", "E12", 0),
])
def test_pair_examples(a, b, value):
    assert pair(P(a), P(b)) == value


def test_pair_with_zero():
    assert pair(P("E0 + 3T4"), DivisorClass.zero()) == 0


@pytest.mark.parametrize("expr, value", [("E0", -2), ("E0+E12+E13", -6), ("E0+2E13", -10), ("2E0", -8)])
def test_self_int(expr, value):
    assert self_int(P(expr)) == value


@given(vectors, vectors, vectors)
def test_pair_symmetric_bilinear(a, b, c):
    assert pair(a, b) == pair(b, a)
    assert pair(a + b, c) == pair(a, c) + pair(b, c)
    assert pair(3 * a, b) == 3 * pair(a, b)


@given(vectors)
def test_lattice_is_even(d):
    assert self_int(d) % 2 == 0


def test_pair_agrees_with_matrix_product():
    rng = np.random.default_rng(7)
    g = build_context().gram
    for _ in range(50):
        a, b = rng.integers(-20, 20, size=(2, 32))
        assert pair(DivisorClass(tuple(a.tolist())), DivisorClass(tuple(b.tolist()))) == int(a @ g @ b)


def test_pair_is_exact_for_large_coefficients():
    big = 10**20
    d = DivisorClass.curve("E0", big) + DivisorClass.curve("T1", big)
    assert self_int(d) == -2 * big**2 - 2 * big**2 + 2 * big**2


def test_equiv_examples():
    assert equiv(P("E0"), P("E0"))
    assert not equiv(P("E0"), P("E12"))


@given(vectors, vectors, vectors)
def test_equiv_respects_pairing(a, b, x):
    if equiv(a, b):
        assert pair(a, x) == pair(b, x)
    assert equiv(a + x, b + x) == equiv(a, b)


def test_kernel_elements_are_equivalent_to_zero():
    import sympy

    kernel = sympy.Matrix(build_context().gram.tolist()).nullspace()
    assert len(kernel) == 15
    for vec in kernel:
        den = sympy.ilcm(*[x.q for x in vec])
        d = DivisorClass(tuple(int(x * den) for x in vec))
        assert equiv(d, DivisorClass.zero())
        assert not d.is_zero()


def test_gram_rank():
    g = build_context().gram
    assert gram_rank() == 17
    assert rational_rank(g.tolist()) == 17
    assert integer_rank(g[:N_NODES, :N_NODES].tolist()) == 16
    p = list(build_context().theta_perm)
    assert integer_rank(g[np.ix_(p, p)].tolist()) == 17


@pytest.mark.parametrize("rows", [
    [[1, 2], [2, 4]],
    [[0, 0], [0, 0]],
    [[2, 3, 5], [7, 11, 13], [17, 19, 23]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
])
def test_integer_rank_small(rows):
    assert integer_rank(rows) == rational_rank(rows)


@pytest.mark.parametrize("text, terms", [
    ("E0 + E13 + E13", {"E0": 1, "E13": 2}),
    ("3E23 + E14 + 2E56", {"E23": 3, "E14": 1, "E56": 2}),
    ("2*E_12 + T_3", {"E12": 2, "T3": 1}),
    ("  T456+T1 ", {"T456": 1, "T1": 1}),
    ("E_{12} + 0E13", {"E12": 1}),
    ("0", {}),
])
def test_parse(text, terms):
    assert parse_divisor(text) == DivisorClass.from_terms(terms)


@pytest.mark.parametrize("text", ["", "   ", "E7", "E0 +", "E0 E12", "3", "2 3E0", "E0 + * E12", "X1", "T7"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_divisor(text)


def test_parse_negative_flag():
    with pytest.raises(ParseError):
        parse_divisor("E0 - T456")
    d = parse_divisor("E0 - T456", allow_negative=True)
    assert d == DivisorClass.from_terms({"E0": 1, "T456": -1})
    assert parse_divisor("-2E12 + T3", allow_negative=True)["E12"] == -2


def test_format_canonical():
    assert format_divisor(P("E13 + E0 + E13")) == "E0 + 2E13"
    assert format_divisor(DivisorClass.zero()) == "0"
    assert format_divisor(P("E0 - 3T456", allow_negative=True)) == "E0 - 3T456"


@given(vectors)
def test_format_parse_round_trip(d):
    assert parse_divisor(format_divisor(d), allow_negative=True) == d


def test_gram_csv():
    lines = gram_csv().splitlines()
    assert len(lines) == 33
    assert lines[0].split(",") == list(LABELS)
    rows = [[int(x) for x in line.split(",")] for line in lines[1:]]
    assert rows == build_context().gram.tolist()
