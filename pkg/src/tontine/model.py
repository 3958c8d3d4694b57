"""Pool, survival model and scenario types.

A scenario is one of the ``2**n`` survival outcomes of the participants,
encoded as a bitmask: bit ``j`` of the index is 1 when participant ``j + 1``
survives.  Index 0 is the all-dead scenario, the only one in which the
administrator collects the fund.

Numbers are kept as given: pools built from :class:`fractions.Fraction`
values produce exact probabilities and payouts, floats produce floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Iterator, Sequence, Union

PROB_TOL = 1e-12
MONEY_RTOL = 1e-9


@dataclass(frozen=True)
class Participant:
    investment: Real
    survival_prob: Real


@dataclass(frozen=True)
class Pool:
    """Participants' investments and agreed survival probabilities.

    ``admin_investment`` is the administrator's contribution and
    ``period_return`` the deterministic fund return R over the period.
    """

    participants: tuple[Participant, ...]
    admin_investment: Real = 0
    period_return: Real = 0

    def __post_init__(self):
        object.__setattr__(self, "participants", tuple(self.participants))

    @classmethod
    def from_arrays(cls, investments, survival_probs, admin_investment=0, period_return=0):
        if len(investments) != len(survival_probs):
            raise ValueError("investments and survival_probs differ in length")
        parts = tuple(Participant(pi, p) for pi, p in zip(investments, survival_probs))
        return cls(parts, admin_investment, period_return)

    @property
    def n(self) -> int:
        return len(self.participants)

    @property
    def investments(self) -> tuple:
        """Participant investments followed by the administrator's."""
        return tuple(p.investment for p in self.participants) + (self.admin_investment,)

    @property
    def survival_probs(self) -> tuple:
        return tuple(p.survival_prob for p in self.participants)

    @property
    def participant_total(self):
        return sum(p.investment for p in self.participants)

    @property
    def total_investment(self):
        return self.participant_total + self.admin_investment

    @property
    def accumulated_total(self):
        """Time-1 value of the fund, (1 + R) times the total investment."""
        return (1 + self.period_return) * self.total_investment

    def with_investments(self, investments, admin_investment=None) -> "Pool":
        admin = self.admin_investment if admin_investment is None else admin_investment
        return Pool.from_arrays(list(investments), self.survival_probs, admin, self.period_return)

    def independent_model(self) -> "Independent":
        return Independent(self.survival_probs)


@dataclass(frozen=True)
class Independent:
    """Participants survive independently with the given probabilities."""

    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(self.probs))

    @property
    def n(self) -> int:
        return len(self.probs)

    def marginals(self) -> tuple:
        return self.probs

    def prob_all_dead(self):
        out = 1
        for p in self.probs:
            out *= 1 - p
        return out


@dataclass(frozen=True)
class JointTable:
    """Explicit probability for each of the ``2**n`` scenario indices."""

    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(self.probs))
        size = len(self.probs)
        if size < 2 or size & (size - 1):
            raise ValueError(f"joint table needs 2**n entries, got {size}")

    @property
    def n(self) -> int:
        return len(self.probs).bit_length() - 1

    def marginals(self) -> tuple:
        out = [0] * self.n
        for index, prob in enumerate(self.probs):
            for j in range(self.n):
                if index >> j & 1:
                    out[j] += prob
        return tuple(out)

    def prob_all_dead(self):
        return self.probs[0]


SurvivalModel = Union[Independent, JointTable]


@dataclass(frozen=True)
class Scenario:
    index: int
    n: int

    def __post_init__(self):
        if not 0 <= self.index < 1 << self.n:
            raise IndexError(f"scenario index {self.index} out of range for n={self.n}")

    @classmethod
    def from_indicators(cls, indicators: Sequence[int]) -> "Scenario":
        index = sum(1 << j for j, alive in enumerate(indicators) if alive)
        return cls(index, len(indicators))

    @property
    def indicators(self) -> tuple[int, ...]:
        """Survival indicators I_1..I_n."""
        return tuple(self.index >> j & 1 for j in range(self.n))

    @property
    def full_indicators(self) -> tuple[int, ...]:
        """I_1..I_n followed by the administrator indicator I_{n+1}."""
        return self.indicators + (admin_indicator(self),)

    @property
    def survivors(self) -> int:
        return bin(self.index).count("1")


def scenarios(n: int) -> Iterator[Scenario]:
    """All scenarios in ascending index order."""
    for index in range(1 << n):
        yield Scenario(index, n)


def admin_indicator(scenario: Scenario) -> int:
    return int(scenario.index == 0)


# omega_1..omega_8 of the three-person worked example, as bitmask indices
PAPER_ORDER_N3 = (7, 6, 4, 5, 3, 1, 2, 0)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def raise_for_violations(self) -> None:
        if self.violations:
            raise ValueError("invalid pool: " + "; ".join(self.violations))


def validate_pool(pool: Pool, model: SurvivalModel | None = None) -> ValidationReport:
    """Collect every violated pool or survival-model constraint.

    Without ``model`` the pool's own probabilities are taken as independent.
    """
    report = ValidationReport()
    bad = report.violations
    if pool.n < 2:
        bad.append(f"a pool needs at least 2 participants, got {pool.n}")
    for i, part in enumerate(pool.participants, start=1):
        if not part.investment > 0:
            bad.append(f"participant {i}: participant investment must be strictly positive")
        if not 0 < part.survival_prob < 1:
            bad.append(f"participant {i}: survival probability must lie strictly in (0, 1)")
    if pool.admin_investment < 0:
        bad.append("administrator investment must be non-negative")
    if pool.period_return < 0:
        bad.append("period return must be non-negative")
    if not pool.total_investment > 0:
        bad.append("total investment must be strictly positive")

    if model is None:
        model = pool.independent_model()
    if model.n != pool.n:
        bad.append(f"survival model covers {model.n} participants, pool has {pool.n}")
        return report
    if isinstance(model, JointTable):
        if any(p < 0 for p in model.probs):
            bad.append("joint table has negative probabilities")
        total = math.fsum(float(p) for p in model.probs)
        if abs(total - 1) > PROB_TOL:
            bad.append(f"joint table sums to {total!r}, not 1")
    all_dead = model.prob_all_dead()
    if not all_dead > 0:
        bad.append("D35: Pr[all dead] = 0")
    elif not all_dead < 1:
        bad.append("D35: Pr[all dead] = 1")
    return report


def scenario_probability(model: SurvivalModel, scenario: Scenario | int):
    index = scenario.index if isinstance(scenario, Scenario) else scenario
    if not 0 <= index < 1 << model.n:
        raise IndexError(f"scenario index {index} out of range for n={model.n}")
    if isinstance(model, JointTable):
        return model.probs[index]
    prob = 1
    for j, p in enumerate(model.probs):
        prob *= p if index >> j & 1 else 1 - p
    return prob
