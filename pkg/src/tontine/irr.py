"""Internal rate of return of a contribute-then-receive annuity scheme."""

from __future__ import annotations

import math

LOW, HIGH = -0.99, 1.0


def annuity_fv(payment: float, years: int, rate: float) -> float:
    """Future value of an ordinary annuity at the last payment date."""
    if rate == 0:
        return payment * years
    return payment * math.expm1(years * math.log1p(rate)) / rate


def annuity_pv(payment: float, years: int, rate: float) -> float:
    """Present value of an ordinary annuity one period before the first payment."""
    if rate == 0:
        return payment * years
    return payment * -math.expm1(-years * math.log1p(rate)) / rate


def annuity_irr(contribution: float, contribution_years: int,
                benefit: float, benefit_years: int, rtol: float = 1e-10) -> float:
    """Rate at which accumulated contributions equal discounted benefits.

    Both annuities are valued at the retirement instant.  Bisection on
    (-0.99, 1.0) until the residual is within ``rtol`` of the contribution
    value, or the bracket stops shrinking in floating point.
    """
    if min(contribution, contribution_years, benefit, benefit_years) <= 0:
        raise ValueError("all annuity_irr inputs must be positive")

    def gap(r):
        return annuity_fv(contribution, contribution_years, r) - annuity_pv(benefit, benefit_years, r)

    lo, hi = LOW, HIGH
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise ValueError("no IRR in range")
    while True:
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        scale = annuity_fv(contribution, contribution_years, mid)
        if abs(g_mid) <= rtol * scale or mid in (lo, hi):
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
