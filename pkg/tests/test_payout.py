from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from tontine import Pool, Scenario, payouts, return_decomposition, scenarios, share_value_initial, \
    share_value_terminal
from tontine.allocation import ShareAllocation, dm_scheme, dr_scheme, t_scheme
from tontine.payout import indicator_matrix, payout_matrix, payouts_two_payments

from conftest import PRINTED_COLUMNS, PRINTED_PAYOUTS, pools, random_pool


def test_share_value_initial(worked_pool):
    assert share_value_initial(worked_pool, dm_scheme(worked_pool)) == pytest.approx(150 / 525)
    assert share_value_initial(worked_pool, t_scheme(worked_pool)) == 1
    pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8], admin_investment=15)
    assert share_value_initial(pool, t_scheme(pool)) == pytest.approx(1.1)


def test_share_value_terminal(worked_pool):
    f = dm_scheme(worked_pool)
    assert share_value_terminal(worked_pool, f, Scenario(7, 3)) == pytest.approx(150 / 525)
    assert share_value_terminal(worked_pool, f, Scenario.from_indicators((1, 0, 1))) == pytest.approx(150 / 425)
    with pytest.raises(ValueError, match="undefined"):
        share_value_terminal(worked_pool, f, Scenario(0, 3))


def test_worked_table(worked_pool):
    f = dm_scheme(worked_pool)
    for column, expected in zip(PRINTED_COLUMNS, PRINTED_PAYOUTS):
        w = payouts(worked_pool, f, Scenario.from_indicators(column))
        assert w.participants == pytest.approx(expected, abs=0.005)


def test_all_dead_goes_to_admin(worked_pool):
    assert payouts(worked_pool, dm_scheme(worked_pool), Scenario(0, 3)).values == (0, 0, 0, 150)


def test_exact_rational_payouts(exact_worked_pool):
    w = payouts(exact_worked_pool, dm_scheme(exact_worked_pool), Scenario(7, 3))
    assert w.values == (Fraction(800, 7), Fraction(200, 7), Fraction(50, 7), 0)
    assert w.total == 150


def test_payouts_scale_with_return():
    pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8], period_return=0.05)
    w = payouts(pool, dm_scheme(pool), Scenario(7, 3))
    assert w[0] == pytest.approx(150 * 1.05 * 400 / 525)


@given(pools(max_n=7))
def test_self_financing_and_zero_for_dead(pool):
    f = dm_scheme(pool)
    for s in scenarios(pool.n):
        w = payouts(pool, f, s)
        assert abs(w.total - pool.accumulated_total) <= 1e-9 * pool.accumulated_total
        for alive, value in zip(s.full_indicators, w):
            if not alive:
                assert value == 0
        assert (w.admin > 0) == (s.index == 0)


@pytest.mark.parametrize("n", range(2, 13))
def test_self_financing_exhaustive(n):
    rng = np.random.default_rng(n)
    pool = random_pool(rng, n=n)
    f = ShareAllocation(tuple(rng.uniform(0.1, 10, n)))
    w = payout_matrix(pool, f, indicator_matrix(np.arange(1 << n), n))
    total = pool.accumulated_total
    assert np.max(np.abs(w.sum(axis=1) - total)) <= 1e-9 * total


def test_self_financing_large_random():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(13, 60))
        pool = random_pool(rng, n=n)
        f = ShareAllocation(tuple(rng.uniform(0.1, 10, n)))
        alive = (rng.random((1, n)) < 0.5).astype(float)
        w = payout_matrix(pool, f, alive)
        assert abs(w.sum() - pool.accumulated_total) <= 1e-9 * pool.accumulated_total


def test_matrix_agrees_with_scalar():
    rng = np.random.default_rng(3)
    pool = random_pool(rng, n=6)
    f = dm_scheme(pool)
    w = payout_matrix(pool, f, indicator_matrix(np.arange(64), 6))
    for s in scenarios(6):
        assert w[s.index] == pytest.approx(payouts(pool, f, s).values, rel=1e-13, abs=1e-13)


@given(pools(max_n=6))
def test_admin_slot_invariance(pool):
    base = dm_scheme(pool)
    for s in scenarios(pool.n):
        ref = payouts(pool, base, s).values
        for slot in (1e-6, 1e6):
            assert payouts(pool, base.with_admin_slot(slot), s).values == pytest.approx(ref, rel=1e-12, abs=0)


@given(pools(max_n=6))
def test_floor_properties(pool):
    dm, t = dm_scheme(pool), t_scheme(pool)
    s0 = share_value_initial(pool, dm)
    growth = 1 + pool.period_return
    for s in scenarios(pool.n):
        w = payouts(pool, dm, s)
        wt = payouts(pool, t, s)
        for i, alive in enumerate(s.indicators):
            assert w[i] >= s0 * growth * dm.shares[i] * alive * (1 - 1e-12)
            assert wt[i] >= growth * pool.participants[i].investment * alive * (1 - 1e-12)


@given(pools(max_n=6))
def test_two_payment_form(pool):
    f = dm_scheme(pool)
    for s in scenarios(pool.n):
        assert payouts_two_payments(pool, f, s).values == pytest.approx(payouts(pool, f, s).values,
                                                                         rel=1e-12, abs=1e-12)


def test_survivor_can_get_less_than_accumulated_stake(worked_pool):
    # participant 3 receives 7.14 for an investment of 20 when everyone survives
    w = payouts(worked_pool, dm_scheme(worked_pool), Scenario(7, 3))
    assert w[2] < (1 + worked_pool.period_return) * 20


@given(pools(max_n=6))
def test_return_decomposition_product(pool):
    f = dm_scheme(pool)
    for s in scenarios(pool.n):
        if s.index == 0:
            continue
        dec = return_decomposition(pool, f, s)
        w = payouts(pool, f, s)
        assert dec.mortality_credit >= 0
        for i, alive in enumerate(s.indicators):
            if alive:
                assert pool.participants[i].investment * dec.growth_factor(i) == pytest.approx(w[i], rel=1e-9)


def test_return_decomposition_deterministic_parts(worked_pool):
    f = dm_scheme(worked_pool)
    first = return_decomposition(worked_pool, f, Scenario(7, 3))
    other = return_decomposition(worked_pool, f, Scenario(1, 3))
    assert first.risk_adjustment == other.risk_adjustment
    assert first.fund_return == other.fund_return


def test_remark_on_ordered_shares():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        shares = np.sort(rng.uniform(0.5, 5, n))
        admin = 0.0 if _ % 2 else float(rng.uniform(0, 20))
        pool = Pool.from_arrays([10.0] * n, [0.5] * n, admin)
        dec = return_decomposition(pool, ShareAllocation(tuple(shares)), Scenario((1 << n) - 1, n))
        assert dec.risk_adjustment[-1] >= -1e-15
        if admin == 0:
            assert dec.risk_adjustment[0] <= 1e-15


def test_no_mortality_credit_when_all_alive(worked_pool):
    dec = return_decomposition(worked_pool, dm_scheme(worked_pool), Scenario(7, 3))
    assert dec.mortality_credit == 0
    with pytest.raises(ValueError):
        return_decomposition(worked_pool, dm_scheme(worked_pool), Scenario(0, 3))


def test_size_mismatch(worked_pool):
    with pytest.raises(ValueError):
        payouts(worked_pool, dr_scheme(2), Scenario(1, 3))
