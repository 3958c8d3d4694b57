"""
Risk sharing without an insurer
===============================

Compensation rules pay each party out of the premium pot after claims are
known.  Contribution rules reimburse every claim and send each party a bill.
One family converts into the other, and a tontine turns out to be the
proportional compensation rule applied to surviving shares.
"""

import numpy as np

from tontine import Pool, Scenario, payouts
from tontine.allocation import dm_scheme
from tontine.drs import (ClaimsDistribution, apply_rule, conditional_mean_rule,
                         contribution_to_compensation, proportional_compensation, tontine_as_drs)

dist = ClaimsDistribution.from_outcomes([
    (0.25, (1.0, 1.0, 2.0)),
    (0.25, (2.0, 1.0, 1.0)),
    (0.50, (0.0, 3.0, 0.0)),
])
premiums = np.array([1.0, 1.0, 1.0])

###############################################################################
# The conditional-mean rule bills each party their expected claim given the
# total.  Converted to compensations, every party ends with the same net
# position either way.

cmean = conditional_mean_rule(dist)
print("contributions:\n", apply_rule(cmean, dist))
print("compensations:\n", apply_rule(contribution_to_compensation(cmean, premiums, 0.05), dist))

###############################################################################
# The three-saver tontine with everyone alive, as a claims vector.

pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8])
f = dm_scheme(pool)
x = tontine_as_drs(pool, f, Scenario(7, 3))
print("claims      :", x)
print("proportional:", np.round(proportional_compensation(pool.investments, x), 4))
print("tontine     :", np.round(payouts(pool, f, Scenario(7, 3)).values, 4))
