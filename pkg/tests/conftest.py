from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from tontine import Independent, Pool

DATA = Path(__file__).parent / "data"

# omega_1..omega_8 of the three-person table as survival indicators
PRINTED_COLUMNS = [(1, 1, 1), (0, 1, 1), (0, 0, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 0), (0, 0, 0)]
# two-decimal entries as printed, columns in the same order, (W_1, W_2, W_3)
PRINTED_PAYOUTS = [
    (114.29, 28.57, 7.14), (0, 120, 30), (0, 0, 150), (141.18, 0, 8.82),
    (120, 30, 0), (150, 0, 0), (0, 150, 0), (0, 0, 0),
]
PRINTED_PROBS = [0.08, 0.32, 0.32, 0.08, 0.02, 0.02, 0.08, 0.08]


@pytest.fixture
def worked_pool():
    return Pool.from_arrays([80, 50, 20], [0.2, 0.5, 0.8])


@pytest.fixture
def exact_worked_pool():
    return Pool.from_arrays([80, 50, 20], [Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)])


@pytest.fixture
def coin_die_model():
    return Independent((Fraction(1, 2), Fraction(1, 6)))


def random_pool(rng: np.random.Generator, n: int | None = None, admin: float | None = None,
                rate: float | None = None) -> Pool:
    """Pool with n in [2, 10], investments in (1, 100), probabilities in (0.05, 0.95)."""
    n = int(rng.integers(2, 11)) if n is None else n
    investments = rng.uniform(1, 100, n).tolist()
    probs = rng.uniform(0.05, 0.95, n).tolist()
    admin = float(rng.uniform(0, 50)) if admin is None else admin
    rate = float(rng.uniform(0, 0.1)) if rate is None else rate
    return Pool.from_arrays(investments, probs, admin, rate)


@st.composite
def pools(draw, min_n=2, max_n=8, admin=None):
    n = draw(st.integers(min_n, max_n))
    money = st.floats(1, 100, allow_nan=False)
    prob = st.floats(0.05, 0.95, allow_nan=False)
    investments = draw(st.lists(money, min_size=n, max_size=n))
    probs = draw(st.lists(prob, min_size=n, max_size=n))
    admin_inv = draw(st.floats(0, 50)) if admin is None else admin
    rate = draw(st.floats(0, 0.2))
    return Pool.from_arrays(investments, probs, admin_inv, rate)
