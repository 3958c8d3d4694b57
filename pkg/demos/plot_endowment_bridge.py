"""
From pure endowments to tontine shares
======================================

An insurer selling a pure endowment pays L = pi (1 + R') / p to a survivor.
Reading those benefits as shares turns the policy book into a tontine with
no guarantor: survivors receive their benefit scaled by a common factor
alpha, which equals one only in the scenarios the insurer priced for.
"""

import numpy as np

from tontine import Pool, Scenario, payouts
from tontine.allocation import allocation_from_benefits, alpha_coefficient, benefits_from_net_premium

pool = Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8], period_return=0.03)
benefits = benefits_from_net_premium(pool, technical_rate=0.03)
f = allocation_from_benefits(benefits)
print("endowment benefits:", np.round(benefits.benefits, 2))

for index in (7, 6, 1):
    s = Scenario(index, 3)
    alpha = alpha_coefficient(pool, benefits, s)
    w = payouts(pool, f, s).participants
    print(f"alive={s.indicators}  alpha={alpha:.4f}  payouts={np.round(w, 2)}")
