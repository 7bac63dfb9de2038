"""Picard lattice of a Jacobian Kummer surface on its 16 nodes and 16 tropes.

Divisors are integer combinations of the 32 curves in a fixed basis order:
the nodes ``E0, E12, ..., E56`` followed by the tropes ``T1..T6, T126, ..., T456``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

N_GEN = 32
N_NODES = 16

# Coefficient bound under which the vectorised int64 kernels are exact.
COEFF_LIMIT = 10**6


class Kind(str, Enum):
    NODE = "node"
    TROPE = "trope"


@dataclass(frozen=True)
class Generator:
    kind: Kind
    label: str
    index: int

    def __str__(self) -> str:
        return self.label


def _labels() -> list[tuple[Kind, str]]:
    nodes = ["E0"] + [f"E{i}{j}" for i, j in combinations(range(1, 7), 2)]
    tropes = [f"T{i}" for i in range(1, 7)]
    tropes += [f"T{i}{j}6" for i, j in combinations(range(1, 6), 2)]
    return [(Kind.NODE, s) for s in nodes] + [(Kind.TROPE, s) for s in tropes]


BASIS: tuple[Generator, ...] = tuple(
    Generator(kind, label, k) for k, (kind, label) in enumerate(_labels())
)
LABELS: tuple[str, ...] = tuple(g.label for g in BASIS)
INDEX: dict[str, int] = {g.label: g.index for g in BASIS}
NODES: tuple[Generator, ...] = BASIS[:N_NODES]
TROPES: tuple[Generator, ...] = BASIS[N_NODES:]


def node_trope_intersection(node: str, trope: str) -> int:
    """Intersection number of a node and a trope, read off their index sets."""
    if node == "E0":
        return 1 if len(trope) == 2 else 0
    ij = {int(node[1]), int(node[2])}
    if len(trope) == 2:
        return int(int(trope[1]) in ij)
    kl6 = {int(trope[1]), int(trope[2]), 6}
    return int(ij <= kl6 or not ij & kl6)


class LatticeError(ValueError):
    pass


class ParseError(LatticeError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    """Integer vector over the 32-curve basis."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != N_GEN:
            raise LatticeError(f"expected {N_GEN} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls) -> DivisorClass:
        return cls((0,) * N_GEN)

    @classmethod
    def from_terms(cls, terms: Mapping[str | int, int] | Iterable[tuple[str | int, int]]) -> DivisorClass:
        items = terms.items() if isinstance(terms, Mapping) else terms
        v = [0] * N_GEN
        for key, c in items:
            v[_index_of(key)] += int(c)
        return cls(tuple(v))

    @classmethod
    def curve(cls, key: str | int, mult: int = 1) -> DivisorClass:
        return cls.from_terms([(key, mult)])

    def __add__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int) -> DivisorClass:
        return DivisorClass(tuple(k * a for a in self.coeffs))

    def __getitem__(self, key: str | int) -> int:
        return self.coeffs[_index_of(key)]

    def __le__(self, other: DivisorClass) -> bool:
        """Componentwise order, used for subdivisors."""
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        return format_divisor(self)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, a in enumerate(self.coeffs) if a)

    @property
    def degree(self) -> int:
        return sum(self.coeffs)

    def is_effective(self) -> bool:
        return min(self.coeffs) >= 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def on_nodes(self) -> bool:
        return not any(self.coeffs[N_NODES:])

    def on_tropes(self) -> bool:
        return not any(self.coeffs[:N_NODES])


def _index_of(key: str | int | Generator) -> int:
    if isinstance(key, Generator):
        return key.index
    if isinstance(key, int):
        if not 0 <= key < N_GEN:
            raise LatticeError(f"basis index out of range: {key}")
        return key
    name = key.replace("_", "").replace("{", "").replace("}", "").strip()
    try:
        return INDEX[name]
    except KeyError:
        raise ParseError(f"unknown generator name: {key!r}") from None


@dataclass(frozen=True, eq=False)
class LatticeContext:
    gram: np.ndarray
    theta_perm: tuple[int, ...]
    basis: tuple[Generator, ...] = BASIS

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """The Gram matrix as Python ints, for scalar loops."""
        return tuple(tuple(r) for r in self.gram.tolist())

    def entry(self, a: str | int, b: str | int) -> int:
        return int(self.gram[_index_of(a), _index_of(b)])


# Node <-> trope swaps of the Enriques involution.
THETA_PAIRS: tuple[tuple[str, str], ...] = (
    ("E0", "T456"), ("E12", "T3"), ("E13", "T2"), ("E14", "T156"),
    ("E15", "T146"), ("E16", "T236"), ("E23", "T1"), ("E24", "T256"),
    ("E25", "T246"), ("E26", "T136"), ("E34", "T356"), ("E35", "T346"),
    ("E36", "T126"), ("E45", "T6"), ("E46", "T5"), ("E56", "T4"),
)


def _check_context(gram: np.ndarray, perm: tuple[int, ...]) -> None:
    assert (gram == gram.T).all()
    assert (np.diag(gram) == -2).all()
    off = gram - np.diag(np.diag(gram))
    assert set(np.unique(off)) <= {0, 1}
    assert not off[:N_NODES, :N_NODES].any() and not off[N_NODES:, N_NODES:].any()
    assert (off[:N_NODES, N_NODES:].sum(axis=1) == 6).all()
    assert (off[:N_NODES, N_NODES:].sum(axis=0) == 6).all()
    p = np.array(perm)
    assert (p[p] == np.arange(N_GEN)).all()
    assert all((k < N_NODES) != (p[k] < N_NODES) for k in range(N_GEN))
    assert (gram[np.ix_(p, p)] == gram).all()


@lru_cache(maxsize=None)
def build_context() -> LatticeContext:
    """Assemble the Gram matrix and the involution permutation (cached, read-only)."""
    gram = np.full((N_GEN, N_GEN), 0, dtype=np.int64)
    np.fill_diagonal(gram, -2)
    for e in NODES:
        for t in TROPES:
            gram[e.index, t.index] = gram[t.index, e.index] = node_trope_intersection(e.label, t.label)
    perm = list(range(N_GEN))
    for e, t in THETA_PAIRS:
        perm[INDEX[e]], perm[INDEX[t]] = INDEX[t], INDEX[e]
    _check_context(gram, tuple(perm))
    gram.flags.writeable = False
    return LatticeContext(gram=gram, theta_perm=tuple(perm))


def _ctx(ctx: LatticeContext | None) -> LatticeContext:
    return build_context() if ctx is None else ctx


def pair(a: DivisorClass, b: DivisorClass, ctx: LatticeContext | None = None) -> int:
    """Intersection number ``a . b`` in exact integer arithmetic."""
    g = _ctx(ctx).rows
    bs = [(j, b.coeffs[j]) for j in b.support]
    total = 0
    for i in a.support:
        row = g[i]
        total += a.coeffs[i] * sum(c * row[j] for j, c in bs)
    return total


def self_int(d: DivisorClass, ctx: LatticeContext | None = None) -> int:
    return pair(d, d, ctx)


def gram_image(d: DivisorClass, ctx: LatticeContext | None = None) -> tuple[int, ...]:
    """Pairings of ``d`` with each of the 32 generators."""
    g = _ctx(ctx).rows
    out = [0] * N_GEN
    for i in d.support:
        a = d.coeffs[i]
        row = g[i]
        for j in range(N_GEN):
            out[j] += a * row[j]
    return tuple(out)


def equiv(a: DivisorClass, b: DivisorClass, ctx: LatticeContext | None = None) -> bool:
    """Linear equivalence: ``a - b`` pairs to zero with every generator."""
    return not any(gram_image(a - b, ctx))


def integer_rank(rows: Iterable[Iterable[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            row = m[r]
            top = m[rank]
            for c in range(col, n_cols):
                # exact by Sylvester's identity
                row[c] = (p * row[c] - f * top[c]) // prev
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def gram_rank(ctx: LatticeContext | None = None) -> int:
    return integer_rank(_ctx(ctx).gram.tolist())


_TOKEN = re.compile(r"\s*(?:(?P<op>[+-])|(?P<num>\d+)\s*\*?|(?P<name>[ET][_{}0-9]*\d[}]?))", re.ASCII)


def parse_divisor(text: str, allow_negative: bool = False) -> DivisorClass:
    """Parse expressions such as ``"3E23 + E14 + 2*E_56"``.

    ``"0"`` denotes the zero class. A ``-`` between terms is only accepted
    when ``allow_negative`` is set.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty expression")
    if s == "0":
        return DivisorClass.zero()
    v = [0] * N_GEN
    pos = 0
    sign = 1
    expect_term = True
    coeff: int | None = None
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected input at position {pos}: {s[pos:]!r}")
        pos = m.end()
        if m.group("op"):
            if coeff is not None:
                raise ParseError("coefficient without generator name")
            if not expect_term:
                sign = 1 if m.group("op") == "+" else -1
                expect_term = True
            elif m.group("op") == "-":
                sign = -sign
            # a leading '+' is harmless
            continue
        if not expect_term:
            raise ParseError(f"missing '+' before position {m.start()}")
        if m.group("num"):
            if coeff is not None:
                raise ParseError(f"malformed integer near position {m.start()}")
            coeff = int(m.group("num"))
            continue
        v[_index_of(m.group("name"))] += sign * (1 if coeff is None else coeff)
        coeff = None
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("expression ends without a generator name")
    d = DivisorClass(tuple(v))
    if not allow_negative and not d.is_effective():
        raise ParseError(f"negative coefficient in effective divisor: {text!r}")
    return d


def format_divisor(d: DivisorClass) -> str:
    """Canonical form: basis order, unit coefficients omitted, e.g. ``E0 + 2E13``."""
    parts: list[str] = []
    for k in d.support:
        a = d.coeffs[k]
        mag = "" if abs(a) == 1 else str(abs(a))
        if not parts:
            parts.append(("-" if a < 0 else "") + mag + LABELS[k])
        else:
            parts.append(("- " if a < 0 else "+ ") + mag + LABELS[k])
    return " ".join(parts) if parts else "0"


def gram_csv(ctx: LatticeContext | None = None) -> str:
    g = _ctx(ctx).gram
    lines = [",".join(LABELS)]
    lines += [",".join(str(int(x)) for x in row) for row in g]
    return "\n".join(lines) + "\n"


def iter_basis_vectors() -> Iterator[DivisorClass]:
    for g in BASIS:
        yield DivisorClass.curve(g.index)
