"""Exact expectations by enumerating all ``2**n`` survival scenarios.

Scenarios are processed in fixed-size chunks of ascending index.  Each chunk
is reduced with :func:`math.fsum` and the chunk partials are combined in
chunk order, so results do not depend on how many threads ran the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .allocation import ShareAllocation
from .model import JointTable, Pool, Scenario, SurvivalModel, scenario_probability, scenarios
from .payout import PayoutVector, indicator_matrix, payout_matrix, payouts

N_MAX = 20
CHUNK = 1 << 15


class EnumerationTooLarge(ValueError):
    """Raised when exact enumeration would exceed ``n_max``; use Monte Carlo."""


@dataclass(frozen=True)
class ExpectationReport:
    expected_payout: np.ndarray
    conditional_expected_payout: np.ndarray
    prob_all_dead: float
    group_expected_payout: float

    @property
    def prob_some_survive(self) -> float:
        return 1.0 - self.prob_all_dead

    def as_dict(self) -> dict:
        return {
            "expected_payout": self.expected_payout.tolist(),
            "conditional_expected_payout": self.conditional_expected_payout.tolist(),
            "prob_all_dead": self.prob_all_dead,
            "group_expected_payout": self.group_expected_payout,
        }


class PayoutRow(NamedTuple):
    scenario: Scenario
    probability: float
    payouts: PayoutVector


def thread_count(workers: int | None = None) -> int:
    """Worker count, capped by the TONTINE_THREADS environment variable."""
    cap = os.environ.get("TONTINE_THREADS")
    limit = max(1, int(cap)) if cap else (os.cpu_count() or 1)
    return max(1, min(workers or 1, limit))


def _check_n(n: int, n_max: int) -> None:
    if n > n_max:
        raise EnumerationTooLarge(
            f"n={n} exceeds exact-enumeration limit n_max={n_max}; use Monte Carlo")


def chunk_probabilities(model: SurvivalModel, indices: np.ndarray, alive: np.ndarray) -> np.ndarray:
    if isinstance(model, JointTable):
        return np.asarray(model.probs, dtype=np.float64)[indices]
    p = np.asarray(model.probs, dtype=np.float64)
    return np.where(alive > 0, p, 1.0 - p).prod(axis=1)


def _enumerate_sums(model: SurvivalModel, columns: Callable[[np.ndarray], np.ndarray],
                    n_max: int, workers: int | None):
    """Probability-weighted column sums over all scenarios.

    Returns ``(sums, prob_all_dead, prob_some_survive)``.
    """
    n = model.n
    _check_n(n, n_max)
    size = 1 << n
    starts = range(0, size, CHUNK)

    def work(start):
        indices = np.arange(start, min(start + CHUNK, size), dtype=np.int64)
        alive = indicator_matrix(indices, n)
        probs = chunk_probabilities(model, indices, alive)
        weighted = probs[:, None] * columns(alive)
        sums = [math.fsum(col) for col in weighted.T]
        some = math.fsum(probs[1:]) if start == 0 else math.fsum(probs)
        return sums, some

    nthreads = thread_count(workers)
    if nthreads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]

    k = len(parts[0][0])
    sums = np.array([math.fsum(p[0][c] for p in parts) for c in range(k)])
    prob_some = math.fsum(p[1] for p in parts)
    prob_dead = float(scenario_probability(model, 0))
    return sums, prob_dead, prob_some


def enumerate_expectations(pool: Pool, f: ShareAllocation, model: SurvivalModel | None = None,
                           n_max: int = N_MAX, workers: int | None = None) -> ExpectationReport:
    """Exact E[W_i], E[W_i | someone survives] and Pr[all dead]."""
    model = pool.independent_model() if model is None else model
    if model.n != pool.n:
        raise ValueError(f"survival model covers {model.n} participants, pool has {pool.n}")
    expected, prob_dead, prob_some = _enumerate_sums(
        model, lambda alive: payout_matrix(pool, f, alive), n_max, workers)
    conditional = np.zeros_like(expected)
    conditional[:-1] = expected[:-1] / prob_some
    return ExpectationReport(
        expected_payout=expected,
        conditional_expected_payout=conditional,
        prob_all_dead=prob_dead,
        group_expected_payout=math.fsum(expected[:-1]),
    )


def _share_fraction_columns(f: ShareAllocation):
    shares = np.asarray(f.shares, dtype=np.float64)

    def columns(alive):
        weighted = alive * shares
        denom = weighted.sum(axis=1)
        out = np.zeros_like(weighted)
        some = denom > 0
        out[some] = weighted[some] / denom[some, None]
        return out

    return columns


def expected_share_fractions(f: ShareAllocation, model: SurvivalModel, n_max: int = N_MAX,
                             workers: int | None = None) -> np.ndarray:
    """E[f_i I_i / sum_j f_j I_j | at least one survivor] for every participant."""
    if f.n != model.n:
        raise ValueError(f"allocation has {f.n} shares, model covers {model.n} participants")
    sums, _, prob_some = _enumerate_sums(model, _share_fraction_columns(f), n_max, workers)
    return sums / prob_some


def expected_share_fraction(f: ShareAllocation, model: SurvivalModel, i: int,
                            n_max: int = N_MAX) -> float:
    """Conditional expected share fraction of participant ``i`` (0-based)."""
    return float(expected_share_fractions(f, model, n_max)[i])


def payout_distribution(pool: Pool, f: ShareAllocation, model: SurvivalModel | None = None,
                        n_max: int = N_MAX) -> list[PayoutRow]:
    """One row per scenario, ascending index: the full payout table."""
    model = pool.independent_model() if model is None else model
    _check_n(pool.n, n_max)
    return [PayoutRow(s, scenario_probability(model, s), payouts(pool, f, s))
            for s in scenarios(pool.n)]
