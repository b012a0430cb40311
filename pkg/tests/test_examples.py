from fractions import Fraction

import pytest

from cornerlab import examples, hull
from cornerlab.numctx import GroupReal

F = Fraction


@pytest.mark.parametrize("eps,k", [(F(1, 2), 1), (F(1, 10), 5), (F(1, 100), 99), (F(1, 1000), 985)])
def test_not_closed_scan(eps, k):
    # k frozen from a direct scan of frac(k sqrt2)
    w = examples.not_closed_sequence(eps)
    assert w.k == k and w.verified
    assert w.hat_s <= eps and w.distance[1] <= eps and w.distance[0] >= 0
    assert w.weights == (F(1, k), F(k - 1, k))
    assert w.combination[1] == 1 and w.combination[2] == 1


def test_not_closed_distance_shrinks():
    dists = [examples.not_closed_sequence(e).hat_s / examples.not_closed_sequence(e).k
             for e in (F(1, 2), F(1, 10), F(1, 100))]
    assert dists[0] > dists[1] > dists[2] > 0


def test_not_closed_other_omega():
    w = examples.not_closed_sequence(F(1, 20), omega="sqrt3", b=F(1, 3))
    assert w.verified and w.hat_s <= F(1, 20)


def test_not_closed_target_is_infeasible():
    inst = examples.not_closed_instance()
    assert examples.target_infeasible(inst)


def test_not_closed_bad_input():
    with pytest.raises(ValueError):
        examples.not_closed_sequence(0)
    with pytest.raises(ValueError):
        examples.not_closed_sequence(F(1, 10), b=1)


def test_pure_integer_report():
    rep = examples.pure_integer_example()
    assert rep.verified, rep.checks
    assert rep.cp.E == ((1, 0, 0),)
    assert rep.witness == (1, 0, 1)


@pytest.mark.parametrize("y", [(1, 0, 1), (1, 2, 1)])
def test_strict_containment_witnesses(y):
    cp = hull.build(examples.pure_integer_instance())
    assert hull.member_closure(cp, y).member
    m = hull.member_conv(cp, y)
    assert not m.member and hull.verify_membership(cp, y, m, closure=False)


def test_pure_integer_other_b():
    rep = examples.pure_integer_example(b=F(1, 3), omega="sqrt3")
    assert rep.verified, rep.checks
    with pytest.raises(ValueError):
        examples.pure_integer_example(b=2)
