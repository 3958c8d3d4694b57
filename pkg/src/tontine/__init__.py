"""Single-period tontine funds.

Share allocation schemes, scenario payouts, exact and Monte Carlo
expectations, actuarial-fairness checks and solvers, and the decentralized
risk-sharing view of the fund.
"""

from .allocation import (EndowmentBenefits, ShareAllocation, allocation_from_benefits, alpha_coefficient,
                         benefits_from_net_premium, dm_scheme, dr_scheme, linear_scheme, reciprocal_scheme,
                         scheme_by_name, t_scheme)
from .expectation import (ExpectationReport, enumerate_expectations, expected_share_fraction,
                          expected_share_fractions, payout_distribution)
from .fairness import (FairnessReport, admin_fair_contribution, check_fairness, solve_fair_investments,
                       solve_fair_investments_internal, uniform_exchangeable_fair_investment)
from .irr import annuity_irr
from .model import (Independent, JointTable, Participant, Pool, Scenario, admin_indicator,
                    scenario_probability, scenarios, validate_pool)
from .montecarlo import McEstimate, simulate
from .payout import (PayoutVector, ReturnDecomposition, payouts, return_decomposition, share_value_initial,
                     share_value_terminal)

__version__ = "0.1.0"
