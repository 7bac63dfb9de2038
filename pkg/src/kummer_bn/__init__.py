"""Exact lattice computations on a Jacobian Kummer surface and its Enriques quotient."""

from .chern import BundleInvariants, ParityError, bn_number, bundle_invariants, theorem_gap_check
from .involution import is_theta_invariant, pushforward_stable_certified, theta
from .lattice import (
    BASIS,
    DivisorClass,
    Generator,
    LatticeContext,
    LatticeError,
    ParseError,
    build_context,
    equiv,
    format_divisor,
    gram_rank,
    pair,
    parse_divisor,
    self_int,
)
from .predicates import (
    BudgetExceeded,
    CheckReport,
    H0Certificate,
    SubdivisorVerdict,
    corollary_closed_form,
    h0_one_certificate,
    no_invariant_subdivisor,
    prop_ex2_closed_form,
    subdivisors,
    theorem_check,
)
from .search import ExampleRecord, Family, SearchParams, enumerate_examples

__version__ = "0.1.0"
