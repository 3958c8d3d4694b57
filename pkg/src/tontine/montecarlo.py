"""Seeded Monte Carlo estimates of expected payouts.

Samples are drawn in fixed-size chunks.  Chunk ``c`` uses a Philox
generator keyed by the seed with its counter offset by ``c``, so every
sample is a pure function of (seed, sample index) and the result is the
same whatever the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .allocation import ShareAllocation
from .expectation import thread_count
from .model import Independent, JointTable, Pool, SurvivalModel
from .payout import indicator_matrix, payout_matrix

CHUNK = 1 << 16
MIN_SAMPLES = 1000
JOINT_TABLE_N_MAX = 24
REJECTION_WARN = 0.2


@dataclass(frozen=True)
class McEstimate:
    mean: np.ndarray
    std_error: np.ndarray
    samples_used: int
    samples_rejected: int
    seed: int
    conditional_mean: np.ndarray | None = None
    conditional_std_error: np.ndarray | None = None
    max_conservation_error: float = 0.0
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def confidence_interval(self, i: int, z: float = 1.959963984540054) -> tuple[float, float]:
        """Normal-approximation interval for E[W_i]."""
        half = z * self.std_error[i]
        return self.mean[i] - half, self.mean[i] + half

    def as_dict(self) -> dict:
        out = {
            "mean": self.mean.tolist(),
            "std_error": self.std_error.tolist(),
            "samples_used": self.samples_used,
            "samples_rejected": self.samples_rejected,
            "seed": self.seed,
        }
        if self.conditional_mean is not None:
            out["conditional_mean"] = self.conditional_mean.tolist()
            out["conditional_std_error"] = self.conditional_std_error.tolist()
        out["warnings"] = list(self.warnings)
        return out


def _generator(seed: int, chunk: int) -> np.random.Generator:
    key = seed & 0xFFFFFFFFFFFFFFFF
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, 0, chunk]))


def sample_survival(model: SurvivalModel, seed: int, chunk: int, count: int) -> np.ndarray:
    """Survival indicators for ``count`` samples of chunk ``chunk``."""
    rng = _generator(seed, chunk)
    if isinstance(model, Independent):
        p = np.asarray(model.probs, dtype=np.float64)
        return (rng.random((count, model.n)) < p).astype(np.float64)
    if model.n > JOINT_TABLE_N_MAX:
        raise ValueError(f"joint-table sampling supports n <= {JOINT_TABLE_N_MAX}")
    cdf = np.cumsum(np.asarray(model.probs, dtype=np.float64))
    cdf /= cdf[-1]
    indices = np.searchsorted(cdf, rng.random(count), side="right")
    indices = np.minimum(indices, len(cdf) - 1)
    return indicator_matrix(indices, model.n)


def sample_payouts(pool: Pool, f: ShareAllocation, model: SurvivalModel, n_samples: int,
                   seed: int) -> np.ndarray:
    """All sampled payout vectors, shape (n_samples, n + 1)."""
    blocks = []
    for chunk, start in enumerate(range(0, n_samples, CHUNK)):
        count = min(CHUNK, n_samples - start)
        blocks.append(payout_matrix(pool, f, sample_survival(model, seed, chunk, count)))
    return np.vstack(blocks)


class _Moments:
    """Running count, mean and centred sum of squares, merged chunk by chunk."""

    def __init__(self, k: int):
        self.count = 0
        self.mean = np.zeros(k)
        self.m2 = np.zeros(k)

    def merge(self, count: int, mean: np.ndarray, m2: np.ndarray) -> None:
        if count == 0:
            return
        total = self.count + count
        delta = mean - self.mean
        self.mean = self.mean + delta * (count / total)
        self.m2 = self.m2 + m2 + delta ** 2 * (self.count * count / total)
        self.count = total

    def std_error(self) -> np.ndarray:
        if self.count < 2:
            return np.full_like(self.mean, np.nan)
        return np.sqrt(self.m2 / (self.count - 1)) / math.sqrt(self.count)


def _chunk_stats(values: np.ndarray):
    if values.shape[0] == 0:
        return 0, np.zeros(values.shape[1]), np.zeros(values.shape[1])
    mean = values.mean(axis=0)
    return values.shape[0], mean, ((values - mean) ** 2).sum(axis=0)


def simulate(pool: Pool, f: ShareAllocation, model: SurvivalModel | None = None,
             n_samples: int = 100_000, seed: int = 0, workers: int | None = None) -> McEstimate:
    """Estimate E[W_i] for all parties and E[W_i | someone survives] for participants."""
    model = pool.independent_model() if model is None else model
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    if model.n != pool.n:
        raise ValueError(f"survival model covers {model.n} participants, pool has {pool.n}")
    if not isinstance(model, (Independent, JointTable)):
        raise TypeError(f"unsupported survival model {type(model).__name__}")
    total = float(pool.accumulated_total)

    def work(job):
        chunk, start = job
        count = min(CHUNK, n_samples - start)
        w = payout_matrix(pool, f, sample_survival(model, seed, chunk, count))
        conservation = float(np.max(np.abs(w.sum(axis=1) - total))) / total
        some = w[:, -1] == 0
        return _chunk_stats(w), _chunk_stats(w[some, :-1]), conservation

    jobs = list(enumerate(range(0, n_samples, CHUNK)))
    nthreads = thread_count(workers)
    if nthreads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(nthreads) as ex:
            parts = list(ex.map(work, jobs))
    else:
        parts = [work(job) for job in jobs]

    full = _Moments(pool.n + 1)
    cond = _Moments(pool.n)
    worst = 0.0
    for all_stats, cond_stats, conservation in parts:
        full.merge(*all_stats)
        cond.merge(*cond_stats)
        worst = max(worst, conservation)

    rejected = n_samples - cond.count
    warnings = []
    if rejected / n_samples > REJECTION_WARN:
        warnings.append(f"estimated Pr[all dead] = {rejected / n_samples:.3f} > {REJECTION_WARN}; "
                        "conditional estimates waste most samples")
    if cond.count == 0:
        warnings.append("every sample was all-dead; conditional estimates undefined")
        cond_mean = cond_se = None
    else:
        cond_mean, cond_se = cond.mean, cond.std_error()
    return McEstimate(
        mean=full.mean,
        std_error=full.std_error(),
        samples_used=n_samples,
        samples_rejected=rejected,
        seed=seed,
        conditional_mean=cond_mean,
        conditional_std_error=cond_se,
        max_conservation_error=worst,
        warnings=tuple(warnings),
    )
