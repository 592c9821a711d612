import random
from fractions import Fraction

import hypothesis
import pytest
from hypothesis import strategies as st

hypothesis.settings.register_profile("ci", max_examples=60, deadline=None)
hypothesis.settings.load_profile("ci")

rationals = st.fractions(
    min_value=Fraction(-9), max_value=Fraction(9), max_denominator=8
)
positive_rationals = st.fractions(
    min_value=Fraction(1, 8), max_value=Fraction(9), max_denominator=8
)


@pytest.fixture
def rng():
    return random.Random(20260810)


def random_cell_grid(order, rnd, zero_prob=0.0, max_num=6, max_den=4):
    """Random nonnegative rational weights, optionally with exact zeros."""
    from aztec.grid import CellWeights, grid_from_cells

    def wt():
        if zero_prob and rnd.random() < zero_prob:
            return Fraction(0)
        return Fraction(rnd.randint(1, max_num), rnd.randint(1, max_den))

    return grid_from_cells(order, lambda r, c: CellWeights(wt(), wt(), wt(), wt()))
