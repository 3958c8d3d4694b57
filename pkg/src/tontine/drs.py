"""Decentralized risk sharing over finite claim distributions.

Two families of rules share the claims X_1..X_{n+1} of a pool without any
guarantor.  Compensation rules pay W(X) out of the accumulated premiums;
contribution rules reimburse every claim and collect C(X) instead.  Rules
here are plain functions from one outcome's claims vector to a vector; the
conditional-mean rule is built from its distribution first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .allocation import ShareAllocation
from .model import Pool, Scenario, admin_indicator, scenario_probability, scenarios

Rule = Callable[[np.ndarray], np.ndarray]

TOTAL_ATOL = 1e-12


@dataclass(frozen=True)
class ClaimsDistribution:
    """Finite table of outcomes, each a probability and a claims vector."""

    probabilities: np.ndarray
    claims: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=np.float64)
        claims = np.atleast_2d(np.asarray(self.claims, dtype=np.float64))
        if probs.ndim != 1 or claims.shape[0] != probs.shape[0]:
            raise ValueError("need one claims vector per outcome probability")
        if np.any(probs < 0) or abs(math.fsum(probs) - 1) > 1e-12:
            raise ValueError("outcome probabilities must be non-negative and sum to 1")
        if np.any(claims < 0):
            raise ValueError("claims must be non-negative")
        if np.any(claims.sum(axis=1) <= 0):
            raise ValueError("every outcome needs a strictly positive total claim")
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "claims", claims)

    @classmethod
    def from_outcomes(cls, outcomes: Sequence[tuple[float, Sequence[float]]]) -> "ClaimsDistribution":
        return cls(np.array([p for p, _ in outcomes]), np.array([x for _, x in outcomes]))

    @property
    def parties(self) -> int:
        return self.claims.shape[1]

    def __len__(self) -> int:
        return self.claims.shape[0]


@dataclass(frozen=True)
class PremiumVector:
    premiums: np.ndarray

    def __post_init__(self):
        prem = np.asarray(self.premiums, dtype=np.float64)
        if np.any(prem < 0) or not prem.sum() > 0:
            raise ValueError("premiums must be non-negative with a positive sum")
        object.__setattr__(self, "premiums", prem)

    def accumulated(self, rate: float) -> np.ndarray:
        return (1 + rate) * self.premiums


def _premiums(premiums) -> np.ndarray:
    return premiums.premiums if isinstance(premiums, PremiumVector) else PremiumVector(premiums).premiums


def proportional_compensation(premiums, claims, rate: float = 0.0) -> np.ndarray:
    """Split the accumulated premiums in proportion to the claims."""
    prem = _premiums(premiums)
    x = np.asarray(claims, dtype=np.float64)
    total_claims = math.fsum(x)
    if not total_claims > 0:
        raise ValueError("total claim must be strictly positive")
    return (1 + rate) * math.fsum(prem) * x / total_claims


def proportional_rule(premiums, rate: float = 0.0) -> Rule:
    return lambda claims: proportional_compensation(premiums, claims, rate)


def uniform_contribution(claims, n_plus_1: int | None = None) -> np.ndarray:
    """Every party contributes an equal slice of the total claim."""
    x = np.asarray(claims, dtype=np.float64)
    parties = len(x) if n_plus_1 is None else n_plus_1
    return np.full(parties, math.fsum(x) / parties)


def uniform_rule(claims) -> np.ndarray:
    return uniform_contribution(claims)


def conditional_mean_contribution(dist: ClaimsDistribution, outcome: int) -> np.ndarray:
    """E[X_i | total claim] evaluated at the total of the given outcome."""
    totals = dist.claims.sum(axis=1)
    same = np.abs(totals - totals[outcome]) <= TOTAL_ATOL
    weights = dist.probabilities[same]
    mass = math.fsum(weights)
    if mass == 0:
        # zero-probability total: condition on the outcomes sharing it equally
        return dist.claims[same].mean(axis=0)
    return np.array([math.fsum(weights * col) for col in dist.claims[same].T]) / mass


def conditional_mean_rule(dist: ClaimsDistribution) -> Rule:
    """Contribution rule mapping a claims vector to E[X | sum X] under ``dist``."""
    totals = dist.claims.sum(axis=1)

    def rule(claims):
        x = np.asarray(claims, dtype=np.float64)
        hits = np.flatnonzero(np.abs(totals - math.fsum(x)) <= TOTAL_ATOL)
        if hits.size == 0:
            raise ValueError("claims total does not occur in the distribution")
        return conditional_mean_contribution(dist, int(hits[0]))

    return rule


def contribution_to_compensation(rule: Rule, premiums, rate: float = 0.0) -> Rule:
    """W_i(X) = (1 + R) pi_i + X_i - C_i(X) for a chosen premium vector."""
    accumulated = (1 + rate) * _premiums(premiums)

    def compensation(claims):
        x = np.asarray(claims, dtype=np.float64)
        return accumulated + x - rule(x)

    return compensation


def compensation_to_contribution(rule: Rule, premiums, rate: float = 0.0) -> Rule:
    """C_i(X) = (1 + R) pi_i + X_i - W_i(X)."""
    accumulated = (1 + rate) * _premiums(premiums)

    def contribution(claims):
        x = np.asarray(claims, dtype=np.float64)
        return accumulated + x - rule(x)

    return contribution


def net_position_compensation(rule: Rule, premiums, claims, rate: float = 0.0) -> np.ndarray:
    """Time-1 net cash flow W_i(X) - (1 + R) pi_i of a compensation rule."""
    return rule(np.asarray(claims, dtype=np.float64)) - (1 + rate) * _premiums(premiums)


def net_position_contribution(rule: Rule, claims) -> np.ndarray:
    """Time-1 net cash flow X_i - C_i(X) of a contribution rule."""
    x = np.asarray(claims, dtype=np.float64)
    return x - rule(x)


def apply_rule(rule: Rule, dist: ClaimsDistribution) -> np.ndarray:
    """Rule output for every outcome of ``dist``, one row per outcome."""
    return np.array([rule(x) for x in dist.claims])


def tontine_as_drs(pool: Pool, f: ShareAllocation, scenario: Scenario) -> np.ndarray:
    """Claims vector (f_1 I_1, ..., f_n I_n, f_{n+1} I_{n+1}) of a tontine scenario."""
    if f.n != pool.n or scenario.n != pool.n:
        raise ValueError("pool, allocation and scenario sizes differ")
    ind = scenario.indicators + (admin_indicator(scenario),)
    return np.array([float(s) * i for s, i in zip(f.full, ind)])


def tontine_claims_distribution(pool: Pool, f: ShareAllocation, model=None) -> ClaimsDistribution:
    """The tontine's claims vectors over every scenario with their probabilities."""
    model = pool.independent_model() if model is None else model
    rows = [(float(scenario_probability(model, s)), tontine_as_drs(pool, f, s))
            for s in scenarios(pool.n)]
    return ClaimsDistribution.from_outcomes(rows)
