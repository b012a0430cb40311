import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cornerlab import exactlp, gjfun, hull, lift
from cornerlab.model import MixedInstance, PureInstance, rational_vector

F = Fraction
PM = (rational_vector(1), rational_vector(-1))


def data(b, P, h, d):
    inst = MixedInstance(rational_vector(b), tuple(rational_vector(p) for p in P), PM)
    return lift.LiftData(inst, h, d)


def gmic_data(b, P):
    f = gjfun.gmic(b)
    s = gjfun.slope_lift(f)
    return data(b, P, (s.s_plus, s.s_minus), [f(p) for p in P])


def brute_min_cost(ld, total=12):
    """min h.s + d.y over M_b for n = 1 and R = {1, -1}: for fixed y the best
    s is the signed distance from sum p y(p) to the nearest point of b + Z."""
    b = ld.inst.b[0].rat
    P = [p[0].rat for p in ld.inst.P]
    hp, hm = ld.h
    best = None
    for ys in _vectors(len(P), total):
        t = b - sum((p * y for p, y in zip(P, ys)), F(0))  # need s = t + z, z in Z
        lo = t - math.floor(t)
        cost = min(hp * lo, hm * (1 - lo)) if lo else F(0)
        cost += sum((dv * y for dv, y in zip(ld.d, ys)), F(0))
        best = cost if best is None else min(best, cost)
    return best


def _vectors(k, total):
    if k == 0:
        yield ()
        return
    for a in range(total + 1):
        for rest in _vectors(k - 1, total - a):
            yield (a,) + rest


def test_psi_examples():
    ld = data(F(2, 5), [F(2, 5)], (1, 1), (1,))
    assert lift.trivial_psi(ld, [0]) == 0
    assert lift.trivial_psi(ld, [F(3, 4)]) == F(3, 4)
    assert lift.trivial_psi(ld, [F(-3, 4)]) == F(3, 4)


def test_pi_examples():
    ld = data(F(2, 5), [F(2, 5)], (1, 1), (1,))
    assert lift.trivial_pi(ld, [F(1, 5)]) == F(1, 5)  # frozen from exhaustive y <= 5
    assert lift.trivial_pi(ld, [0]) == 0
    assert lift.trivial_pi(ld, [F(2, 5)]) <= 1


def test_pi_matches_brute_force():
    ld = data(F(2, 5), [F(1, 5), F(2, 5)], (3, 2), (F(1, 2), 1))
    for i in range(-10, 11):
        p = F(i, 10)
        # pi(p) is the min-cost problem with right-hand side p and no integer shift
        expect = min(
            (ld.h[0] * r if r >= 0 else ld.h[1] * -r) + sum(dv * y for dv, y in zip(ld.d, ys))
            for ys in _vectors(2, 6)
            for r in [p - F(1, 5) * ys[0] - F(2, 5) * ys[1]]
        )
        assert lift.trivial_pi(ld, [p]) == expect


@given(st.fractions(-3, 3, max_denominator=12), st.fractions(-3, 3, max_denominator=12),
       st.fractions(0, 4, max_denominator=6))
def test_psi_sublinear(r1, r2, lam):
    ld = gmic_data(F(2, 5), [F(1, 5), F(2, 5)])
    p1, p2 = lift.trivial_psi(ld, [r1]), lift.trivial_psi(ld, [r2])
    assert lift.trivial_psi(ld, [lam * r1]) == lam * p1
    assert lift.trivial_psi(ld, [r1 + r2]) <= p1 + p2


@given(st.fractions(-2, 2, max_denominator=10))
def test_pi_below_psi(p):
    ld = gmic_data(F(3, 7), [F(1, 7), F(3, 7), F(5, 7)])
    assert lift.trivial_pi(ld, [p]) <= lift.trivial_psi(ld, [p])


@pytest.mark.parametrize("b,P", [(F(2, 5), [F(1, 5), F(2, 5), F(3, 5)]), (F(1, 4), [F(1, 4), F(1, 2)])])
def test_gmic_restriction_is_valid_and_tight(b, P):
    ld = gmic_data(b, P)
    res = lift.validity_oracle(ld, 1)
    assert res.valid and res.optimum == 1 == brute_min_cost(ld)


def test_zero_tuple_is_invalid_for_one():
    ld = data(F(2, 5), [F(2, 5)], (0, 0), (0,))
    res = lift.validity_oracle(ld, 1)
    assert res.valid is False and res.optimum == 0 and res.minimizer is not None


def test_nonnegative_tuple_is_valid_for_zero():
    ld = data(F(2, 5), [F(1, 5)], (2, 3), (1,))
    assert lift.validity_oracle(ld, 0).valid


@given(st.integers(0, 10**6))
def test_validity_matches_brute_force(seed):
    rng = random.Random(seed)
    q = rng.randint(2, 6)
    b = F(rng.randint(1, q - 1), q)
    P = sorted({F(rng.randint(1, q - 1), q) for _ in range(rng.randint(1, 2))})
    ld = data(b, P, (F(rng.randint(0, 6), 2), F(rng.randint(0, 6), 2)), [F(rng.randint(0, 4), 2) for _ in P])
    if 0 in ld.h:
        return  # brute force assumes finite per-ray cost on both sides
    res = lift.validity_oracle(ld, 1)
    assert res.optimum == brute_min_cost(ld)


def test_lift_data_preconditions():
    with pytest.raises(lift.LiftError):
        data(F(1, 2), [F(1, 2)], (1, -1), (1,))
    with pytest.raises(lift.LiftError):
        lift.LiftData(MixedInstance(rational_vector(F(1, 2)), (rational_vector(F(1, 2)),),
                                    (rational_vector(1),)), (1,), (1,))


def test_facet_dominate_single_point():
    cp = hull.build(PureInstance(rational_vector(F(2, 5)), (rational_vector(F(2, 5)),)))
    (facet,) = hull.facets(cp)
    dom = lift.facet_dominate(cp, facet)
    # smallest valid uniform M is 5/2 (y = 0 forces |s| >= 2/5); doubling stops at 4
    assert dom.M == 4 and dom.pi_on_P == [1] and dom.dominates
    assert dom.tuple_validity.valid and dom.data_validity.valid


def test_facet_dominate_matches_gmic(two_fifths):
    cp = hull.build(two_fifths)
    dom = lift.facet_dominate(cp, hull.Facet((F(1, 2), F(1)), F(1)))
    f = gjfun.gmic(F(2, 5))
    assert dom.M == 4 and dom.dominates and all(dom.tight)
    assert dom.pi_on_P == [f(F(1, 5)), f(F(2, 5))]
    assert all(dom.pi(p) <= dv for p, dv in zip(two_fifths.P, (F(1, 2), F(1))))


def test_facet_dominate_rejects_orthant_facet(two_fifths):
    cp = hull.build(two_fifths)
    with pytest.raises(lift.LiftError):
        lift.facet_dominate(cp, hull.Facet((F(1), F(0)), F(0)))


def test_separation(two_fifths):
    cp = hull.build(two_fifths)
    sep = lift.separate_from_closure(cp, (0, 0))
    assert sep.d == (F(1, 2), F(1)) and sep.alpha == 1
    for e in cp.E:
        assert lift.separate_from_closure(cp, e) == "member"
        half = tuple(F(v, 2) for v in e)
        sep = lift.separate_from_closure(cp, half)
        assert sum(a * v for a, v in zip(sep.d, half)) == F(1, 2)
        assert all(sum(a * v for a, v in zip(sep.d, g)) >= 1 for g in cp.E)
        assert all(sum(a * v for a, v in zip(sep.d, r)) >= 0 for r in cp.rays)
