import math
from fractions import Fraction

import numpy as np
import pytest

from tontine import Independent, JointTable, Pool, enumerate_expectations, expected_share_fraction, \
    expected_share_fractions, payout_distribution
from tontine.allocation import ShareAllocation, dm_scheme, dr_scheme
from tontine.expectation import EnumerationTooLarge

from conftest import PRINTED_PROBS, random_pool


def naive_expectations(pool, f, probs):
    """Definition-level double loop: sum over scenarios of probability * payout."""
    n = pool.n
    total = (1 + pool.period_return) * (sum(p.investment for p in pool.participants) + pool.admin_investment)
    sums = [0.0] * (n + 1)
    for index in range(1 << n):
        alive = [(index >> j) & 1 for j in range(n)]
        prob = 1.0
        for a, p in zip(alive, probs):
            prob *= p if a else 1 - p
        denom = sum(s * a for s, a in zip(f.shares, alive))
        if denom == 0:
            sums[n] += prob * total
        else:
            for i in range(n):
                sums[i] += prob * total * f.shares[i] * alive[i] / denom
    return sums


def test_group_expectation_worked(worked_pool):
    report = enumerate_expectations(worked_pool, dm_scheme(worked_pool))
    assert report.group_expected_payout == pytest.approx(138, rel=1e-9)
    assert report.prob_all_dead == pytest.approx(0.08, abs=1e-15)


def test_coin_die_admin_probability(coin_die_model):
    pool = Pool.from_arrays([1, 1], [Fraction(1, 2), Fraction(1, 6)])
    report = enumerate_expectations(pool, dr_scheme(2), coin_die_model)
    assert report.prob_all_dead == 5 / 12
    assert coin_die_model.prob_all_dead() == Fraction(5, 12)


@pytest.mark.parametrize("n", range(2, 11))
def test_matches_naive_oracle(n):
    rng = np.random.default_rng(100 + n)
    pool = random_pool(rng, n=n)
    f = ShareAllocation(tuple(rng.uniform(0.1, 10, n)))
    report = enumerate_expectations(pool, f)
    oracle = naive_expectations(pool, f, pool.survival_probs)
    assert report.expected_payout == pytest.approx(oracle, rel=1e-12)


def test_exact_rational_oracle(exact_worked_pool):
    """Float enumeration against exact rational arithmetic on the worked example."""
    from tontine import payouts, scenario_probability, scenarios

    f = dm_scheme(exact_worked_pool)
    model = exact_worked_pool.independent_model()
    exact = [sum(scenario_probability(model, s) * payouts(exact_worked_pool, f, s)[i] for s in scenarios(3))
             for i in range(4)]
    assert sum(exact[:3]) == 138
    pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8])
    report = enumerate_expectations(pool, dm_scheme(pool))
    assert report.expected_payout == pytest.approx([float(x) for x in exact], rel=1e-13)


def test_report_invariants():
    rng = np.random.default_rng(5)
    for _ in range(20):
        pool = random_pool(rng)
        report = enumerate_expectations(pool, dm_scheme(pool))
        total = pool.accumulated_total
        assert math.fsum(report.expected_payout) == pytest.approx(total, rel=1e-9)
        assert report.group_expected_payout == pytest.approx(total * (1 - report.prob_all_dead), rel=1e-9)
        assert report.expected_payout[:-1] == pytest.approx(
            report.conditional_expected_payout[:-1] * report.prob_some_survive, rel=1e-12)


def test_joint_table_matches_independent():
    rng = np.random.default_rng(9)
    pool = random_pool(rng, n=5)
    indep = pool.independent_model()
    from tontine import scenario_probability
    table = JointTable(tuple(scenario_probability(indep, i) for i in range(32)))
    f = dm_scheme(pool)
    a = enumerate_expectations(pool, f, indep)
    b = enumerate_expectations(pool, f, table)
    assert a.expected_payout == pytest.approx(b.expected_payout, rel=1e-12)


def test_worker_count_does_not_change_result(monkeypatch):
    rng = np.random.default_rng(1)
    pool = random_pool(rng, n=17)
    f = dm_scheme(pool)
    monkeypatch.setenv("TONTINE_THREADS", "1")
    one = enumerate_expectations(pool, f, workers=4)
    monkeypatch.setenv("TONTINE_THREADS", "4")
    four = enumerate_expectations(pool, f, workers=4)
    assert np.array_equal(one.expected_payout, four.expected_payout)


def test_n_max():
    pool = Pool.from_arrays([1.0] * 6, [0.5] * 6)
    with pytest.raises(EnumerationTooLarge, match="Monte Carlo"):
        enumerate_expectations(pool, dr_scheme(6), n_max=5)


def test_share_fractions_exchangeable():
    model = Independent((0.3,) * 5)
    fractions = expected_share_fractions(dr_scheme(5), model)
    assert fractions == pytest.approx([0.2] * 5, rel=1e-12)


def test_share_fractions_exchangeable_joint_table():
    # exchangeable but dependent: table depends only on the number of survivors
    by_count = [0.1, 0.05, 0.08, 0.02]
    raw = [by_count[bin(i).count("1")] for i in range(8)]
    model = JointTable(tuple(p / sum(raw) for p in raw))
    assert expected_share_fractions(dr_scheme(3), model) == pytest.approx([1 / 3] * 3, rel=1e-12)


def test_share_fractions_sum_to_one():
    rng = np.random.default_rng(4)
    for _ in range(10):
        pool = random_pool(rng)
        fractions = expected_share_fractions(dm_scheme(pool), pool.independent_model())
        assert fractions.sum() == pytest.approx(1, abs=1e-12)


def test_share_fraction_against_enumerate(worked_pool):
    f = dm_scheme(worked_pool)
    report = enumerate_expectations(worked_pool, f)
    expected = report.expected_payout[0] / worked_pool.accumulated_total / report.prob_some_survive
    assert expected_share_fraction(f, worked_pool.independent_model(), 0) == pytest.approx(expected, rel=1e-12)


def test_payout_distribution(worked_pool):
    rows = payout_distribution(worked_pool, dm_scheme(worked_pool))
    assert len(rows) == 8
    assert [r.scenario.index for r in rows] == list(range(8))
    assert math.fsum(r.probability for r in rows) == pytest.approx(1, abs=1e-12)
    by_index = {r.scenario.index: r.probability for r in rows}
    assert [by_index[i] for i in (7, 6, 4, 5, 3, 1, 2, 0)] == pytest.approx(PRINTED_PROBS, abs=1e-15)
    assert len(payout_distribution(Pool.from_arrays([1, 2], [0.5, 0.5]), dr_scheme(2))) == 4
