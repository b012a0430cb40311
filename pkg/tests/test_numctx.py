from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cornerlab.numctx import (
    ComparisonCapExceeded,
    ContextMismatch,
    GroupReal,
    GroupVector,
    NumberContext,
    Tag,
    compare,
    enclose,
    qlin_kernel,
    value_from_json,
    vector_from_json,
)
from conftest import fractions

CTX = NumberContext.sqrt(2, 3)
S2, S3 = CTX.tag("sqrt2"), CTX.tag("sqrt3")


def reals():
    return st.builds(lambda r, a, b: r + a * S2 + b * S3, fractions(), fractions(), fractions())


def test_enclosure_of_sqrt2():
    lo, hi = enclose(S2, Fraction(1, 100))
    assert (lo, hi) == (Fraction(181, 128), Fraction(91, 64))
    assert lo * lo < 2 < hi * hi


def test_compare_basic():
    assert compare(S2, 1) == 1
    assert compare(S2, Fraction(3, 2)) == -1
    assert compare(S2 - S2, 0) == 0
    assert S2 + S3 > Fraction(314, 100)


def test_equality_is_canonical():
    assert S2 + 1 - S2 == GroupReal(1)
    assert (S2 * 2).coeff("sqrt2") == 2
    assert (S2 - S2).ctx is None


def test_floor_and_frac():
    assert S2.floor() == 1
    assert (S2 * 5).floor() == 7
    assert (-S2).floor() == -2
    f = (S2 * 5).frac()
    assert f == S2 * 5 - 7 and 0 < f < Fraction(1, 10)


def test_comparison_cap_is_reported():
    # equal numbers never reach this path; an absurdly small cap does
    with pytest.raises(ComparisonCapExceeded):
        compare(S2, Fraction(141421356237, 10**11), max_halvings=3)


def test_irrational_product_rejected():
    with pytest.raises(TypeError):
        S2 * S3


def test_context_mismatch():
    other = NumberContext.sqrt(5).tag("sqrt5")
    with pytest.raises(ContextMismatch):
        S2 + other


def test_unknown_tag_and_bad_radicand():
    with pytest.raises(ContextMismatch):
        GroupReal(0, {"sqrt7": 1}, CTX)
    with pytest.raises(ValueError):
        Tag("sqrt4", "sqrt", 4)


def test_qlin_kernel_example():
    vs = [GroupVector([S2]), GroupVector([-S2]), GroupVector([Fraction(1, 2)])]
    assert qlin_kernel(vs) == [[1, 1, 0], [0, 0, 1]]


def test_json_round_trip():
    v = GroupVector([S2 + Fraction(1, 3), GroupReal(Fraction(-2, 7))])
    assert vector_from_json(v.to_json(), CTX) == v
    assert value_from_json("3/4", None) == GroupReal(Fraction(3, 4))
    with pytest.raises(ValueError):
        value_from_json(0.5, None)


@given(reals(), reals())
def test_compare_antisymmetric(x, y):
    assert compare(x, y) == -compare(y, x)
    assert (compare(x, y) == 0) == (x == y)


@given(reals(), reals(), reals())
def test_order_is_translation_invariant(x, y, z):
    assert compare(x, y) == compare(x + z, y + z)


@given(reals(), st.integers(1, 40))
def test_enclosure_contains_and_nests(x, k):
    w1, w2 = Fraction(1, 2 ** k), Fraction(1, 2 ** (k + 3))
    lo1, hi1 = enclose(x, w1)
    lo2, hi2 = enclose(x, w2)
    assert hi1 - lo1 <= w1 and hi2 - lo2 <= w2
    assert lo1 <= hi2 and lo2 <= hi1


@given(reals())
def test_frac_in_unit_interval(x):
    f = x.frac()
    assert 0 <= f < 1
    assert (x - f).is_integer()
