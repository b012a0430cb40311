import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cornerlab import gjfun, oracles, suite
from cornerlab.gjfun import AdditiveFunction, PwlPeriodic, ShiftedFunction, SublinearOneD, gmic
from cornerlab.numctx import GroupReal, NumberContext

F = Fraction


def triangle(b=F(1, 2)):
    return gmic(b)


def test_gmic_values():
    f = gmic(F(2, 5))
    assert f(0) == 0 and f(F(2, 5)) == 1 and f(F(1, 5)) == F(1, 2)
    assert f(F(7, 10)) == F(1, 2)
    assert f(F(-3, 5)) == 1 and f(F(12, 5)) == 1
    assert f.slopes == (F(5, 2), F(-5, 3))


@given(st.fractions(min_value=-3, max_value=3, max_denominator=30))
def test_periodicity(x):
    f = gmic(F(3, 7))
    assert f(x) == f(x + 1) == f(x - 2)


def test_value_at_irrational_point(sqrt2_ctx):
    f = gmic(F(1, 2))
    x = sqrt2_ctx.tag("sqrt2")  # frac(sqrt2) ~ 0.414 < 1/2
    assert f(x) == (x - 1) * 2


def test_gmic_is_minimal_and_liftable():
    for q in range(2, 9):
        for a in range(1, q):
            b = F(a, q)
            assert gjfun.check_minimal_pure(gmic(b), b).minimal
    ok, psi = gjfun.check_liftable(gmic(F(2, 5)), F(2, 5))
    assert ok and psi == SublinearOneD(F(5, 2), F(5, 3))


def test_non_minimal_is_rejected_for_lifting():
    f = PwlPeriodic((F(0), F(1, 2)), (F(0), F(1, 2)))
    with pytest.raises(ValueError):
        gjfun.check_liftable(f, F(1, 2))


def test_vertex_check_agrees_with_grid():
    rng = random.Random(11)
    for _ in range(100):
        f = suite.random_pwl(rng)
        ok, wit = gjfun.check_subadditive(f)
        assert ok == oracles.grid_subadditive(f, oracles.grid_step(f))
        if not ok:
            u, v = wit
            assert f(u) + f(v) < f(u + v)


def test_spike_breaks_subadditivity():
    for f, b in suite.minimal_function_suite()[:40]:
        g = suite.spiked(f, b)
        rep = gjfun.check_minimal_pure(g, b)
        assert not rep.subadditive
        u, v = rep.subadditivity_witness
        assert g(u) + g(v) < g(u + v)


def test_symmetry_witness():
    f = PwlPeriodic((F(0), F(1, 4), F(1, 2)), (F(0), F(1, 4), F(1)))
    ok, x = gjfun.check_symmetric(f, F(1, 2))
    assert not ok and f(x) + f(F(1, 2) - x) != 1


def test_slope_lift_cases():
    assert gjfun.slope_lift(triangle()) == SublinearOneD(2, 2)
    zero = PwlPeriodic((F(0),), (F(0),))
    assert gjfun.slope_lift(zero) == SublinearOneD(0, 0)
    psi = gjfun.slope_lift(gmic(F(1, 3)))
    assert psi == SublinearOneD(3, F(3, 2))


def test_lift_dominates_function():
    for f, b in suite.minimal_function_suite()[:60]:
        psi = gjfun.slope_lift(f)
        assert psi.is_sublinear()
        for i in range(-40, 41):
            r = F(i, 20)
            assert psi(r) >= f(r)


@given(st.fractions(-5, 5, max_denominator=10), st.fractions(-5, 5, max_denominator=10),
       st.fractions(0, 5, max_denominator=10))
def test_sublinear_homogeneous_and_subadditive(r1, r2, lam):
    psi = SublinearOneD(F(3, 2), F(1, 2))
    assert psi(r1 + r2) <= psi(r1) + psi(r2)
    assert psi(lam * r1) == lam * psi(r1)


def test_mixed_minimality():
    f = gmic(F(2, 5))
    psi = gjfun.slope_lift(f)
    assert gjfun.check_mixed_minimal(psi, f, F(2, 5), 1).minimal
    rep = gjfun.check_mixed_minimal(SublinearOneD(3, 3), f, F(2, 5), 1)
    assert not rep.psi_is_slope_lift and not rep.lipschitz_ok and not rep.minimal
    assert not gjfun.check_mixed_minimal(psi, f, F(2, 5), 2).normalized


def test_extract_theta_recovers_shift():
    ctx = NumberContext.sqrt(2, 3)
    g = ShiftedFunction(gmic(F(1, 2)), AdditiveFunction({"sqrt2": F(3, 4), "sqrt3": F(-2)}, ctx))
    est = gjfun.extract_theta(g, 200)
    for sym, exact in (("sqrt2", F(3, 4)), ("sqrt3", F(-2))):
        e = est[sym]
        assert e.exact == exact and e.within_bound()
        assert e.scan_min >= exact >= e.scan_max_dual
        assert e.error_bound == F(1, 200)


def test_extract_theta_pure_base_is_zero(sqrt2_ctx):
    g = ShiftedFunction(gmic(F(1, 3)), AdditiveFunction({}, sqrt2_ctx))
    est = gjfun.extract_theta(g, 50, symbols=["sqrt2"])
    assert est["sqrt2"].exact == 0 and est["sqrt2"].within_bound()


def test_shift_is_additive(sqrt2_ctx):
    a = AdditiveFunction({"sqrt2": F(5, 3)}, sqrt2_ctx)
    x = sqrt2_ctx.tag("sqrt2")
    assert a(x * 3 + F(1, 2)) == 5 and a(F(7, 2)) == 0
    with pytest.raises(ValueError):
        AdditiveFunction({"sqrt5": 1}, sqrt2_ctx)


def test_json_round_trip(sqrt2_ctx):
    f = gmic(F(2, 7))
    assert gjfun.function_from_json(json.loads(json.dumps(f.to_json()))) == f
    g = ShiftedFunction(f, AdditiveFunction({"sqrt2": F(1, 3)}, sqrt2_ctx))
    back = gjfun.function_from_json(json.loads(json.dumps(g.to_json())))
    x = sqrt2_ctx.tag("sqrt2") * 2
    assert back.base == f and back.shift.coeff("sqrt2") == F(1, 3)
    assert back(x) == g(x)


def test_bad_functions():
    with pytest.raises(ValueError):
        ShiftedFunction(PwlPeriodic((F(0), F(1, 2)), (F(0), F(-1))), AdditiveFunction({}))
    with pytest.raises(ValueError):
        gjfun.check_minimal_pure(gmic(F(1, 2)), 1)
