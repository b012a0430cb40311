import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cornerlab import exactlp, hull, linalg, oracles, suite
from cornerlab.examples import pure_integer_instance
from cornerlab.model import PureInstance, PureSolution, check_feasible, rational_vector
from cornerlab.numctx import GroupVector, NumberContext

F = Fraction


def rational_instances():
    """Small random rational instances with nonempty C^P."""
    @st.composite
    def build(draw):
        rng = random.Random(draw(st.integers(0, 10**9)))
        n = draw(st.integers(1, 2))
        q = draw(st.integers(2, 5 if n == 1 else 4))
        k = draw(st.integers(1, min(3, q ** n - 1)))
        inst = suite.random_rational_instance(rng, n, k, q)
        if not suite.reachable(inst):
            inst = PureInstance(inst.b, tuple(dict.fromkeys(inst.P + (inst.b,))))
        return inst
    return build()


@pytest.fixture(scope="module")
def pure_cp():
    return hull.build(pure_integer_instance())


# ---------------------------------------------------------------------------
# worked examples


def test_single_point_instance():
    inst = PureInstance(rational_vector(F(1, 2)), (rational_vector(F(1, 2)),))
    cp = hull.build(inst)
    assert cp.E == ((1,),) and cp.rays == ((2,),) and cp.complete


def test_two_fifths_points_and_rays(two_fifths):
    cp = hull.build(two_fifths)
    # frozen from brute force over sum(y) <= 5 and sum(d) <= 25
    assert cp.E == ((0, 1), (2, 0))
    assert cp.rays == ((0, 5), (1, 2), (3, 1), (5, 0))
    assert list(cp.rays) == oracles.brute_minimal_rays(two_fifths, 25)


def test_pure_integer_generators(pure_cp):
    # order (b, w, 1 - w); frozen from brute force over sum(y) <= 10
    assert pure_cp.E == ((1, 0, 0),)
    assert pure_cp.rays == ((0, 1, 1), (2, 0, 0))
    assert all(r[1] == r[2] for r in pure_cp.rays)
    inst = pure_cp.instance
    assert list(pure_cp.E) == oracles.brute_minimal_points(inst, 10)
    assert list(pure_cp.rays) == oracles.brute_minimal_rays(inst, 10)


def test_affine_hull_examples(two_fifths, sqrt2_ctx):
    assert hull.affine_hull(two_fifths) == ([], [])
    theta, d = hull.affine_hull(pure_integer_instance())
    assert theta == [[0, 1, -1]] and d == [0]
    w = GroupVector([sqrt2_ctx.tag("sqrt2")])
    assert hull.affine_hull(PureInstance(w, (w,))) == ([[1]], [1])


def test_affine_hull_with_b_outside_span(sqrt2_ctx):
    ctx = NumberContext.sqrt(2, 3)
    w, v = ctx.tag("sqrt2"), ctx.tag("sqrt3")
    inst = PureInstance(GroupVector([v + w]), (GroupVector([w]), rational_vector(F(1, 2))))
    theta, d = hull.affine_hull(inst)
    assert theta == [[1, 0]] and d == [1]
    assert hull.build(inst).empty


def test_recession_cone_rational(two_fifths):
    rec = hull.recession_cone(hull.build(two_fifths))
    assert rec.theta == () and rec.generators == ((0, 5), (5, 0))


def test_recession_cone_pure_integer(pure_cp):
    rec = hull.recession_cone(pure_cp)
    assert rec.theta == ((0, 1, -1),)
    assert rec.generators == ((0, 1, 1), (2, 0, 0))


def test_recession_cone_of_empty_corner(sqrt2_ctx):
    inst = PureInstance(rational_vector(F(1, 2)), (GroupVector([sqrt2_ctx.tag("sqrt2")]),))
    cp = hull.build(inst)
    assert cp.empty and cp.complete
    with pytest.raises(hull.EmptyCornerError):
        hull.recession_cone(cp)


def test_rationality_reports(two_fifths, pure_cp):
    r = hull.rationality_report(hull.build(two_fifths))
    assert r.P_rational and r.rec_is_orthant and r.full_dimensional and r.dimension == 2
    r = hull.rationality_report(pure_cp)
    assert not (r.P_rational or r.rec_is_orthant or r.full_dimensional)
    single = hull.build(PureInstance(rational_vector(F(1, 2)), (rational_vector(F(1, 2)),)))
    r = hull.rationality_report(single)
    assert r.agree and r.dimension == 1


def test_membership(pure_cp, two_fifths):
    for e in pure_cp.E:
        assert hull.member_conv(pure_cp, e).member
    assert hull.member_conv(pure_cp, (1, 1, 1)).member
    assert hull.member_conv(pure_cp, (3, 1, 1)).member
    m = hull.member_conv(pure_cp, (1, 2, 1))
    assert not m.member and hull.verify_membership(pure_cp, (1, 2, 1), m, closure=False)
    c = hull.member_closure(pure_cp, (1, 2, 1))
    assert c.member and hull.verify_membership(pure_cp, (1, 2, 1), c, closure=True)
    cp = hull.build(two_fifths)
    z = hull.member_closure(cp, (0, 0))
    assert not z.member and hull.verify_membership(cp, (0, 0), z, closure=True)
    assert hull.member_closure(cp, (5, 7)).member


def test_facets_examples(two_fifths, pure_cp):
    single = hull.build(PureInstance(rational_vector(F(1, 2)), (rational_vector(F(1, 2)),)))
    assert hull.facets(single) == [hull.Facet((F(1),), F(1))]
    fs = hull.facets(hull.build(two_fifths))
    assert hull.Facet((F(1, 2), F(1)), F(1)) in fs  # y1 + 2 y2 >= 2
    assert len(fs) == 3
    pf = hull.facets(pure_cp)
    assert pf == [hull.Facet((F(0), F(1), F(0)), F(0)), hull.Facet((F(1), F(0), F(0)), F(1))]


def test_facet_dimension_cap():
    inst = PureInstance(rational_vector(F(1, 2)), tuple(rational_vector(F(i, 11)) for i in range(1, 10)))
    cp = hull.build(inst, cap=1)
    with pytest.raises((ValueError, hull.IncompleteError)):
        hull.facets(cp)


def test_aff_intersection_on_generators(pure_cp):
    ok, _ = hull.check_aff_intersection(pure_cp, list(pure_cp.E) + [(1, 2, 1), (0, 0, 0), (2, 3, 3)])
    assert ok


def test_incomplete_is_flagged(two_fifths):
    cp = hull.build(two_fifths, cap=1)
    assert not cp.complete
    with pytest.raises(hull.IncompleteError):
        hull.member_conv(cp, (0, 1))
    assert not hull.minimal_points(two_fifths, node_cap=1).complete


def test_degree_bounds_rational(two_fifths):
    bd = hull.degree_bounds(two_fifths)
    assert bd.points <= 5 and bd.rays <= 5
    assert bd.scaled_rays == ((0, 5), (5, 0))


# ---------------------------------------------------------------------------
# invariants


def _antichain(vs):
    return not any(a != b and all(x <= y for x, y in zip(a, b)) for a in vs for b in vs)


@given(rational_instances())
def test_enumeration_matches_brute_force(inst):
    cp = hull.build(inst)
    q = linalg.common_denominator([v.rat for p in (inst.b, *inst.P) for v in p])
    assert cp.complete
    assert list(cp.E) == oracles.brute_minimal_points(inst, q ** inst.n)
    assert list(cp.rays) == oracles.brute_minimal_rays(inst, q ** inst.n)


@given(rational_instances())
def test_generator_invariants(inst):
    cp = hull.build(inst)
    assert _antichain(cp.E) and _antichain(cp.rays)
    for e in cp.E:
        assert check_feasible(inst, PureSolution(e))
    for r in cp.rays:
        assert any(r) and min(r) >= 0 and oracles.is_ray(inst, r)


def _decomposes(cp, y):
    rays = cp.rays
    for e in cp.E:
        rhs = [F(a - b) for a, b in zip(y, e)]
        if min(rhs) < 0:
            continue
        A = [[F(r[i]) for r in rays] for i in range(len(y))]
        if not rays:
            if not any(rhs):
                return True
            continue
        lp = exactlp.LinearProgram([0] * len(rays), A, ["="] * len(y), rhs)
        if exactlp.solve_mip(exactlp.MipProblem(lp, [True] * len(rays))).status == exactlp.OPTIMAL:
            return True
    return False


@given(rational_instances())
def test_decomposition_soundness(inst):
    cp = hull.build(inst)
    for y in oracles.vectors_up_to(len(inst.P), 6):
        if check_feasible(inst, PureSolution(y)):
            assert _decomposes(cp, y), y


def test_decomposition_soundness_irrational(pure_cp):
    for y in oracles.vectors_up_to(3, 8):
        if check_feasible(pure_cp.instance, PureSolution(y)):
            assert _decomposes(pure_cp, y)


@given(rational_instances())
def test_facets_against_generators(inst):
    cp = hull.build(inst)
    fs = hull.facets(cp)
    dim = hull.dimension(cp)
    gens = [(e, 1) for e in cp.E] + [(r, 0) for r in cp.rays]
    for f in fs:
        assert all(f.value(e) >= f.rhs for e in cp.E)
        assert all(f.value(r) >= 0 for r in cp.rays)
        tight = [[F(v) for v in g] + [F(t)] for g, t in gens if f.value(g) == (f.rhs if t else 0)]
        assert linalg.rank(tight) >= dim  # dim affinely independent tight generators


def test_facets_against_generators_irrational(pure_cp):
    dim = hull.dimension(pure_cp)
    gens = [(e, 1) for e in pure_cp.E] + [(r, 0) for r in pure_cp.rays]
    for f in hull.facets(pure_cp):
        tight = [[F(v) for v in g] + [F(t)] for g, t in gens if f.value(g) == (f.rhs if t else 0)]
        assert linalg.rank(tight) >= dim


def _sample_points(k, rng, count=25):
    return [[F(rng.randint(0, 8), rng.randint(1, 3)) for _ in range(k)] for _ in range(count)]


@pytest.mark.parametrize("irrational", [False, True])
def test_conv_equals_closure_iff_orthant(irrational):
    rng = random.Random(1)
    insts = (suite.irrational_suite()[:4] + [pure_integer_instance()]) if irrational else suite.rational_suite()[:8]
    for inst in insts:
        cp = hull.build(inst)
        pts = _sample_points(len(inst.P), rng) + [list(e) for e in cp.E]
        # points of the closure that satisfy the rational equations only when P is rational
        pts += [[F(v) + 1 for v in e] for e in cp.E]
        same = all(hull.member_conv(cp, y).member == hull.member_closure(cp, y).member for y in pts)
        orthant = hull.rationality_report(cp).rec_is_orthant
        assert same == orthant
        assert orthant != irrational


@given(rational_instances(), st.integers(0, 10**6))
def test_aff_intersection_random(inst, seed):
    cp = hull.build(inst)
    ok, _ = hull.check_aff_intersection(cp, _sample_points(len(inst.P), random.Random(seed), 10))
    assert ok
