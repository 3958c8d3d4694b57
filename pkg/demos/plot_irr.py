"""
What does a saver actually earn?
================================

Someone pays 10,000 a year for 40 years and then draws 27,000 a year.  The
internal rate of return depends heavily on how long the drawdown lasts.
"""

from tontine.irr import annuity_fv, annuity_irr

for years in (10, 20, 30):
    rate = annuity_irr(10_000, 40, 27_000, years)
    print(f"{years:2d} years of benefits -> {rate:+.4%} a year")

rate = annuity_irr(10_000, 40, 27_000, 20)
print(f"pot at retirement at that rate: {annuity_fv(10_000, 40, rate):,.0f}")
