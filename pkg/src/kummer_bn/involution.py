"""The Enriques involution acting on divisor classes."""

from __future__ import annotations

from .lattice import (
    INDEX,
    THETA_PAIRS,
    DivisorClass,
    LatticeContext,
    build_context,
    equiv,
)

__all__ = [
    "THETA_PAIRS",
    "theta",
    "theta_index",
    "is_theta_invariant",
    "pushforward_stable_certified",
]


def theta_index(k: int | str, ctx: LatticeContext | None = None) -> int:
    ctx = build_context() if ctx is None else ctx
    k = INDEX[k] if isinstance(k, str) else k
    return ctx.theta_perm[k]


def theta(d: DivisorClass, ctx: LatticeContext | None = None) -> DivisorClass:
    """Swap each node with its partner trope (and back), extended linearly."""
    perm = (build_context() if ctx is None else ctx).theta_perm
    out = [0] * len(perm)
    for k, a in enumerate(d.coeffs):
        out[perm[k]] = a
    return DivisorClass(tuple(out))


def is_theta_invariant(d: DivisorClass, ctx: LatticeContext | None = None) -> bool:
    """True when ``theta(d)`` is linearly equivalent to ``d``.

    Such classes are exactly the pullbacks of line bundles from the
    Enriques quotient.
    """
    return equiv(theta(d, ctx), d, ctx)


def pushforward_stable_certified(d: DivisorClass, ctx: LatticeContext | None = None) -> bool:
    """One-sided certificate that the rank-2 pushforward of O(d) is stable.

    ``False`` only means that no certificate is available.
    """
    return not is_theta_invariant(d, ctx)
