"""
Three savers, one pot
=====================

Three people put 80, 50 and 20 into a tontine and survive to the horizon
with probabilities 0.2, 0.5 and 0.8.  Shares are bought at the
discounted-mortality price pi / p, and the survivors split the pot in
proportion to the shares they hold.
"""

import numpy as np

from tontine import Pool, enumerate_expectations, payout_distribution
from tontine.allocation import dm_scheme
from tontine.model import PAPER_ORDER_N3

pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8])
f = dm_scheme(pool)
print("shares:", f.shares)

###############################################################################
# Every survival pattern, most-alive first.  The last column belongs to the
# administrator, who collects the pot only when nobody survives.

rows = {row.scenario.index: row for row in payout_distribution(pool, f)}
print(f"{'alive':>8} {'prob':>6}   W1       W2       W3       admin")
for index in PAPER_ORDER_N3:
    row = rows[index]
    alive = "".join(str(b) for b in row.scenario.indicators)
    values = "  ".join(f"{w:7.2f}" for w in row.payouts)
    print(f"{alive:>8} {float(row.probability):6.2f}  {values}")

###############################################################################
# In expectation the participants get back 92% of what they paid.  The
# missing 8% is the chance that everyone dies and the administrator keeps
# the lot.

report = enumerate_expectations(pool, f)
print("E[W]           :", np.round(report.expected_payout, 3))
print("group expected :", report.group_expected_payout)
print("Pr[all dead]   :", report.prob_all_dead)
