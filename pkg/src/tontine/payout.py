"""Share values, scenario payouts and the three-factor return decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import ShareAllocation
from .model import Pool, Scenario, admin_indicator


@dataclass(frozen=True)
class PayoutVector:
    """Time-1 payouts W_1..W_n to participants and W_{n+1} to the administrator."""

    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, item):
        return self.values[item]

    @property
    def participants(self) -> tuple:
        return self.values[:-1]

    @property
    def admin(self):
        return self.values[-1]

    @property
    def total(self):
        return sum(self.values)


@dataclass(frozen=True)
class ReturnDecomposition:
    """Survivor return split as (1 + R)(1 + R'_i)(1 + R'').

    ``risk_adjustment`` holds R'_i for every participant; it is deterministic
    and may be negative.  ``mortality_credit`` is the scenario-dependent R''.
    """

    fund_return: float
    risk_adjustment: tuple
    mortality_credit: float

    def growth_factor(self, i: int):
        """(1 + R)(1 + R'_i)(1 + R'') for participant ``i`` (0-based)."""
        return (1 + self.fund_return) * (1 + self.risk_adjustment[i]) * (1 + self.mortality_credit)


def _check_sizes(pool: Pool, f: ShareAllocation, scenario: Scenario | None = None) -> None:
    if f.n != pool.n:
        raise ValueError(f"allocation has {f.n} shares for {pool.n} participants")
    if scenario is not None and scenario.n != pool.n:
        raise ValueError(f"scenario is for n={scenario.n}, pool has n={pool.n}")


def _surviving_shares(f: ShareAllocation, scenario: Scenario):
    """Sum of f_j I_j over j = 1..n+1, strictly positive in every scenario."""
    alive = sum(s for s, i in zip(f.shares, scenario.indicators) if i)
    return alive + f.admin_slot * admin_indicator(scenario)


def share_value_initial(pool: Pool, f: ShareAllocation):
    _check_sizes(pool, f)
    return pool.total_investment / sum(f.shares)


def share_value_terminal(pool: Pool, f: ShareAllocation, scenario: Scenario):
    _check_sizes(pool, f, scenario)
    if admin_indicator(scenario):
        raise ValueError("S(1) undefined: no participant survives")
    return pool.accumulated_total / _surviving_shares(f, scenario)


def payouts(pool: Pool, f: ShareAllocation, scenario: Scenario) -> PayoutVector:
    """Each survivor's share of the fund in proportion to their tontine shares.

    When nobody survives the administrator slot is the only live share, so
    the administrator receives the whole fund.
    """
    _check_sizes(pool, f, scenario)
    total = pool.accumulated_total
    denom = _surviving_shares(f, scenario)
    values = tuple(total * s / denom if alive else 0 * total
                   for s, alive in zip(f.full, scenario.full_indicators))
    return PayoutVector(values)


def payouts_two_payments(pool: Pool, f: ShareAllocation, scenario: Scenario) -> PayoutVector:
    """Payouts written as own shares at S(0)(1+R) plus a slice of the dead shares."""
    _check_sizes(pool, f, scenario)
    unit = share_value_initial(pool, f) * (1 + pool.period_return)
    ind = scenario.full_indicators
    alive = _surviving_shares(f, scenario)
    dead = sum(s * (1 - i) for s, i in zip(f.full, ind)) - f.admin_slot
    return PayoutVector(tuple(unit * s * (1 + dead / alive) * i for s, i in zip(f.full, ind)))


def return_decomposition(pool: Pool, f: ShareAllocation, scenario: Scenario) -> ReturnDecomposition:
    _check_sizes(pool, f, scenario)
    if admin_indicator(scenario):
        raise ValueError("return decomposition undefined: no participant survives")
    s0 = share_value_initial(pool, f)
    ind = scenario.full_indicators
    alive = _surviving_shares(f, scenario)
    dead = sum(s * (1 - i) for s, i in zip(f.full, ind)) - f.admin_slot
    adjust = tuple(s0 * s / part.investment - 1 for s, part in zip(f.shares, pool.participants))
    return ReturnDecomposition(pool.period_return, adjust, dead / alive)


def indicator_matrix(indices: np.ndarray, n: int) -> np.ndarray:
    """Rows of survival indicators (float 0/1) for the given scenario indices."""
    indices = np.asarray(indices, dtype=np.int64)
    bits = np.arange(n, dtype=np.int64)
    return ((indices[:, None] >> bits) & 1).astype(np.float64)


def payout_matrix(pool: Pool, f: ShareAllocation, alive: np.ndarray) -> np.ndarray:
    """Vectorised payouts for a batch of scenarios.

    ``alive`` is an (m, n) array of survival indicators; the result is
    (m, n + 1) with the administrator in the last column.
    """
    _check_sizes(pool, f)
    alive = np.asarray(alive, dtype=np.float64)
    shares = np.asarray(f.shares, dtype=np.float64)
    weighted = alive * shares
    alive_shares = weighted.sum(axis=1)
    all_dead = (alive_shares == 0).astype(np.float64)
    denom = alive_shares + float(f.admin_slot) * all_dead
    total = float(pool.accumulated_total)
    out = np.empty((alive.shape[0], pool.n + 1))
    out[:, :-1] = total * weighted / denom[:, None]
    out[:, -1] = total * all_dead
    return out
