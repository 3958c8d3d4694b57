"""
Making the pot fair
===================

A fund is fair for a participant when their expected payout equals what
their money would have earned on its own.  Here we measure how unfair the
three-saver pool is, then fix it two ways.
"""

import numpy as np

from tontine import Independent, Pool, check_fairness
from tontine.allocation import dm_scheme, dr_scheme
from tontine.fairness import (admin_fair_contribution, solve_fair_investments,
                              solve_fair_investments_internal)

pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8])
report = check_fairness(pool, dm_scheme(pool))
print("residuals E[W_i] - pi_i:", np.round(report.participant_residuals, 3))
print("admin residual         :", round(report.admin_residual, 3))

###############################################################################
# The administrator walks away with 12 on average for putting in nothing.
# Asking them to stake their share of the all-dead risk closes that gap.

admin = admin_fair_contribution(pool)
print("fair admin stake:", round(admin, 6))
topped_up = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8], admin)
print("admin fair now  :", check_fairness(topped_up, dm_scheme(topped_up)).admin_fair)

###############################################################################
# Fairness for each participant needs the investments themselves to move.
# With shares fixed up front (equal shares here) the answer is explicit.

model = Independent((0.2, 0.5, 0.8))
pis = solve_fair_investments(dr_scheme(3), admin, model)
print("fair investments, equal shares:", np.round(pis, 4))

###############################################################################
# When shares are priced from the investments, the fair point is found by
# iteration.  The three-saver pool settles in a few dozen steps.

result = solve_fair_investments_internal(dm_scheme, admin, model)
print(f"DM fixed point after {result.iterations} steps:", np.round(result.investments, 4))
fair_pool = Pool.from_arrays(result.investments.tolist(), [0.2, 0.5, 0.8], admin)
print("every participant fair:", check_fairness(fair_pool, dm_scheme(fair_pool)).participant_fair)
