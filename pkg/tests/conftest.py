from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cornerlab.model import PureInstance, rational_vector
from cornerlab.numctx import NumberContext

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fractions(max_num=20, max_den=12):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@pytest.fixture
def sqrt2_ctx():
    return NumberContext.sqrt(2)


@pytest.fixture
def two_fifths():
    """b = 2/5, P = {1/5, 2/5}."""
    return PureInstance(rational_vector(Fraction(2, 5)),
                        (rational_vector(Fraction(1, 5)), rational_vector(Fraction(2, 5))))
