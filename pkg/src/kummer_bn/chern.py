"""Numerical invariants of the rank-2 bundle ``V = pi_* O_X(D)`` on the Enriques quotient.

Only intersection numbers are needed. For the etale double cover,
``c1^2 = D^2 + D.theta(D)`` and ``c2 = D.theta(D) / 2``; everything else
follows by Riemann-Roch with chi(O_Y) = 1 and K_Y numerically trivial.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .involution import theta
from .lattice import DivisorClass, LatticeContext, LatticeError, pair, self_int


class ParityError(LatticeError):
    """D.theta(D) is odd, so c2 would not be an integer."""


@dataclass(frozen=True)
class BundleInvariants:
    d2: int
    c1sq: int
    c2: int
    chi: int
    gap: int  # c2 - c1^2/2
    h0_lower: int
    dim_m_lower: int  # expected dimension 4c2 - c1^2 - 3
    dim_p_upper: int  # 3c2 - c1^2/2 - 1
    rho1: int  # Brill-Noether number for k=1, with dim_m_lower standing in for dim M_H

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def bundle_invariants(d: DivisorClass, ctx: LatticeContext | None = None) -> BundleInvariants:
    if not d.is_effective() or d.is_zero():
        raise LatticeError(f"expected a nonzero effective divisor, got {d}")
    d2 = self_int(d, ctx)
    cross = pair(d, theta(d, ctx), ctx)
    if cross % 2:
        raise ParityError(f"D.theta(D) = {cross} is odd for {d}")
    c1sq = d2 + cross
    c2 = cross // 2
    chi = d2 // 2 + 2
    dim_m = 4 * c2 - c1sq - 3
    return BundleInvariants(
        d2=d2,
        c1sq=c1sq,
        c2=c2,
        chi=chi,
        gap=c2 - c1sq // 2,
        h0_lower=max(chi, 0),
        dim_m_lower=dim_m,
        dim_p_upper=3 * c2 - c1sq // 2 - 1,
        rho1=dim_m - (1 - chi),
    )


def bn_number(k: int, inv: BundleInvariants) -> int:
    """rho^k = dim M_H - k(k - chi), using the lower bound for dim M_H."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return inv.dim_m_lower - k * (k - inv.chi)


def theorem_gap_check(inv: BundleInvariants) -> bool:
    return inv.gap > 2
