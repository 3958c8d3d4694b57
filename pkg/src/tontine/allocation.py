"""Tontine share allocation schemes.

Every scheme maps a pool to a strictly positive share vector f_1..f_n.  The
administrator slot f_{n+1} never changes a payout; it only keeps the payout
denominator positive in the all-dead scenario, so it defaults to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .model import Pool, Scenario, admin_indicator


@dataclass(frozen=True)
class ShareAllocation:
    shares: tuple
    admin_slot: float = 1

    def __post_init__(self):
        object.__setattr__(self, "shares", tuple(self.shares))
        if any(not s > 0 for s in self.shares):
            raise ValueError("every tontine share count must be strictly positive")
        if not self.admin_slot > 0:
            raise ValueError("admin slot must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.shares)

    @property
    def full(self) -> tuple:
        """f_1..f_n followed by the administrator slot."""
        return self.shares + (self.admin_slot,)

    def scaled(self, factor) -> "ShareAllocation":
        return ShareAllocation(tuple(factor * s for s in self.shares), factor * self.admin_slot)

    def with_admin_slot(self, admin_slot) -> "ShareAllocation":
        return ShareAllocation(self.shares, admin_slot)


@dataclass(frozen=True)
class EndowmentBenefits:
    """Pure-endowment survival benefits L_1..L_n plus an administrator slot."""

    benefits: tuple
    admin_slot: float = 1

    def __post_init__(self):
        object.__setattr__(self, "benefits", tuple(self.benefits))
        if any(not b > 0 for b in self.benefits) or not self.admin_slot > 0:
            raise ValueError("endowment benefits must be strictly positive")


def linear_scheme(pool: Pool, g: Callable) -> ShareAllocation:
    """Shares linear in the investment: f_i = pi_i * g(p_i)."""
    weights = [g(part.survival_prob) for part in pool.participants]
    for i, w in enumerate(weights, start=1):
        if not w > 0:
            raise ValueError(f"g must be strictly positive; g(p_{i}) = {w!r}")
    return ShareAllocation(tuple(part.investment * w for part, w in zip(pool.participants, weights)))


def dm_scheme(pool: Pool) -> ShareAllocation:
    """Money at risk: f_i = pi_i / p_i, the net-premium endowment benefit."""
    return ShareAllocation(tuple(part.investment / part.survival_prob for part in pool.participants))


def t_scheme(pool: Pool) -> ShareAllocation:
    """Shares equal to the investment, f_i = pi_i."""
    return ShareAllocation(tuple(part.investment for part in pool.participants))


def dr_scheme(n: int) -> ShareAllocation:
    """Uniform allocation: survivors split the fund equally."""
    if n < 2:
        raise ValueError("dr_scheme needs n >= 2")
    return ShareAllocation((1,) * n)


def reciprocal_scheme(pool: Pool) -> ShareAllocation:
    """f_i = 1 / p_i; ignores the investment, which favours small investors."""
    return ShareAllocation(tuple(1 / part.survival_prob for part in pool.participants))


def benefits_from_net_premium(pool: Pool, technical_rate=0) -> EndowmentBenefits:
    """Survival benefit bought by each investment as a net single premium."""
    if technical_rate < 0:
        raise ValueError("technical rate must be non-negative")
    return EndowmentBenefits(tuple(
        part.investment * (1 + technical_rate) / part.survival_prob for part in pool.participants))


def allocation_from_benefits(benefits: EndowmentBenefits) -> ShareAllocation:
    return ShareAllocation(benefits.benefits, benefits.admin_slot)


def alpha_coefficient(pool: Pool, benefits: EndowmentBenefits, scenario: Scenario):
    """Scenario-dependent scaling that makes alpha * L_i * I_i self-financing."""
    claims = sum(b for b, alive in zip(benefits.benefits, scenario.indicators) if alive)
    claims += benefits.admin_slot * admin_indicator(scenario)
    return pool.accumulated_total / claims


def benefits_scheme(pool: Pool, technical_rate=0) -> ShareAllocation:
    return allocation_from_benefits(benefits_from_net_premium(pool, technical_rate))


# Schemes addressable by name.  Each maps a pool to its allocation; the flag
# says whether the shares depend on the investments.
SCHEMES: dict[str, tuple[Callable[[Pool], ShareAllocation], bool]] = {
    "dm": (dm_scheme, True),
    "t": (t_scheme, True),
    "dr": (lambda pool: dr_scheme(pool.n), False),
    "reciprocal": (reciprocal_scheme, False),
    "benefits": (benefits_scheme, True),
}


def scheme_by_name(name: str) -> Callable[[Pool], ShareAllocation]:
    try:
        return SCHEMES[name][0]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; choose from {', '.join(SCHEMES)}") from None


def depends_on_investments(name: str) -> bool:
    return SCHEMES[name][1]
