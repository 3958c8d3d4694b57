"""
Sampling a large pool
=====================

Exact enumeration walks all 2**n survival patterns, which stops being
practical in the low twenties.  Monte Carlo estimates the same
expectations with standard errors, and a fixed seed reproduces them bit
for bit whatever the thread count.
"""

import numpy as np

from tontine import Pool, enumerate_expectations, simulate
from tontine.allocation import dm_scheme
from tontine.expectation import EnumerationTooLarge

rng = np.random.default_rng(1)
pool = Pool.from_arrays(rng.uniform(1, 100, 12).tolist(), rng.uniform(0.05, 0.95, 12).tolist(),
                        admin_investment=5.0)
f = dm_scheme(pool)

exact = enumerate_expectations(pool, f).expected_payout
est = simulate(pool, f, n_samples=200_000, seed=7)
z = (est.mean - exact) / est.std_error
print("exact   :", np.round(exact[:4], 3))
print("sampled :", np.round(est.mean[:4], 3))
print("z-scores:", np.round(z[:4], 2))

###############################################################################
# Same seed, different worker count, same bits.

again = simulate(pool, f, n_samples=200_000, seed=7, workers=1)
print("identical:", np.array_equal(est.mean, again.mean))

###############################################################################
# Past n_max the enumerator refuses and points at the sampler.

big = Pool.from_arrays([10.0] * 40, [0.6] * 40)
try:
    enumerate_expectations(big, dm_scheme(big))
except EnumerationTooLarge as exc:
    print("enumeration:", exc)
print("sampled:", np.round(simulate(big, dm_scheme(big), n_samples=50_000, seed=0).mean[:3], 3))
