"""Actuarial fairness checks and fair-investment solvers.

Fair investments are only determined up to a common scale, so every solver
takes the administrator's investment as the anchor and returns participant
investments relative to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .allocation import ShareAllocation
from .expectation import N_MAX, enumerate_expectations, expected_share_fractions
from .model import Pool, SurvivalModel

FAIR_RTOL = 1e-9


@dataclass(frozen=True)
class FairnessReport:
    """Residuals E[W_i] - (1 + R) pi_i and the three fairness verdicts.

    Participant residuals are judged against (1 + R) pi_i.  The administrator
    and collective conditions are both judged against the accumulated fund
    total: they are the same equation read from opposite sides, and a shared
    yardstick keeps their verdicts in step.
    """

    participant_residuals: np.ndarray
    admin_residual: float
    collective_residual: float
    participant_fair: bool
    admin_fair: bool
    collectively_fair: bool
    tol: float

    def as_dict(self) -> dict:
        return {
            "participant_residuals": self.participant_residuals.tolist(),
            "admin_residual": self.admin_residual,
            "collective_residual": self.collective_residual,
            "participant_fair": self.participant_fair,
            "admin_fair": self.admin_fair,
            "collectively_fair": self.collectively_fair,
            "tolerance": self.tol,
        }


def check_fairness(pool: Pool, f: ShareAllocation, model: SurvivalModel | None = None,
                   tol: float = FAIR_RTOL, n_max: int = N_MAX) -> FairnessReport:
    model = pool.independent_model() if model is None else model
    report = enumerate_expectations(pool, f, model, n_max=n_max)
    growth = 1 + float(pool.period_return)
    invested = np.asarray(pool.investments, dtype=np.float64)
    accumulated = growth * invested
    expected = report.expected_payout

    residuals = expected[:-1] - accumulated[:-1]
    admin_residual = float(expected[-1] - accumulated[-1])
    collective = report.group_expected_payout - growth * float(pool.participant_total)
    yardstick = tol * float(pool.accumulated_total)
    return FairnessReport(
        participant_residuals=residuals,
        admin_residual=admin_residual,
        collective_residual=collective,
        participant_fair=bool(np.all(np.abs(residuals) <= tol * accumulated[:-1])),
        admin_fair=abs(admin_residual) <= yardstick,
        collectively_fair=abs(collective) <= yardstick,
        tol=tol,
    )


def admin_fair_contribution(pool: Pool, model: SurvivalModel | None = None):
    """Administrator investment that makes the fund fair for the administrator.

    Only the participants' investments are used; the pool's current
    administrator investment is ignored.
    """
    model = pool.independent_model() if model is None else model
    dead = model.prob_all_dead()
    if not 0 < dead < 1:
        raise ValueError("Pr[all dead] must lie strictly in (0, 1)")
    return pool.participant_total * dead / (1 - dead)


def _odds_some_survive(model: SurvivalModel) -> float:
    dead = float(model.prob_all_dead())
    if not 0 < dead < 1:
        raise ValueError("Pr[all dead] must lie strictly in (0, 1)")
    return (1 - dead) / dead


def solve_fair_investments(f: ShareAllocation, admin_investment: float, model: SurvivalModel,
                           n_max: int = N_MAX) -> np.ndarray:
    """Participant investments that make the fund fair for each participant.

    ``f`` must not depend on the investments.
    """
    if not admin_investment > 0:
        raise ValueError("admin_investment must be strictly positive; it fixes the scale")
    fractions = expected_share_fractions(f, model, n_max)
    return admin_investment * fractions * _odds_some_survive(model)


@dataclass(frozen=True)
class FixedPointResult:
    investments: np.ndarray
    converged: bool
    iterations: int
    max_rel_change: float
    trajectory: list = field(repr=False, default_factory=list)


def solve_fair_investments_internal(scheme: Callable[[Pool], ShareAllocation],
                                    admin_investment: float, model: SurvivalModel,
                                    tol: float = 1e-12, max_iter: int = 10_000,
                                    damping: float = 1.0, period_return: float = 0,
                                    start: np.ndarray | None = None,
                                    n_max: int = N_MAX) -> FixedPointResult:
    """Fair investments when the shares are themselves a function of them.

    Iterates pi <- anchor * E[share fraction under scheme(pi)] * odds with
    the model's marginals as the agreed survival probabilities.  Nothing
    guarantees convergence; a non-converged result carries the trajectory
    and ``converged=False``.
    """
    if not admin_investment > 0:
        raise ValueError("admin_investment must be strictly positive; it fixes the scale")
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    probs = [float(p) for p in model.marginals()]
    odds = _odds_some_survive(model)
    current = np.full(model.n, admin_investment * odds / model.n) if start is None \
        else np.asarray(start, dtype=np.float64)
    trajectory = [current.copy()]
    change = math.inf
    for iteration in range(1, max_iter + 1):
        pool = Pool.from_arrays(current.tolist(), probs, admin_investment, period_return)
        target = admin_investment * expected_share_fractions(scheme(pool), model, n_max) * odds
        updated = (1 - damping) * current + damping * target
        change = float(np.max(np.abs(updated - current) / np.abs(updated)))
        current = updated
        trajectory.append(current.copy())
        if change <= tol:
            return FixedPointResult(current, True, iteration, change, trajectory)
    return FixedPointResult(current, False, max_iter, change, trajectory)


def uniform_exchangeable_fair_investment(n: int, prob_all_dead: float, prob_some_survive: float,
                                         admin_investment: float) -> float:
    """Common fair investment when survival is exchangeable and shares are uniform."""
    if not (0 < prob_all_dead < 1 and 0 < prob_some_survive < 1):
        raise ValueError("probabilities must lie strictly in (0, 1)")
    if abs(prob_all_dead + prob_some_survive - 1) > 1e-12:
        raise ValueError("prob_all_dead and prob_some_survive must sum to 1")
    return admin_investment / n * prob_some_survive / prob_all_dead
