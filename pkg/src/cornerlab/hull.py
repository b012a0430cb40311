"""Corner polyhedra ``C^P = conv(I_b) cap V_P`` for finite ``P``.

Feasible points are ``y in Z^P_+`` with ``sum_p p*y(p) in b + Z^n``.  Writing
every coordinate as ``rational + tag part``, this splits into

* the *tag equations* ``T y = t_b`` (exact linear equalities, because the
  tags are Q-independent of 1 and of each other), and
* the *congruence* ``Q y = b_rat (mod Z^n)`` on the rational parts.

Minimal points and minimal rays are enumerated breadth-first by total
degree.  A partial vector is pruned when another kept vector of the same
state (congruence residue, tag defect) lies below it, or when it dominates a
minimal solution already found; both prunings are safe for minimal
solutions.  The search stops at a proven degree bound:

    Let C = {x >= 0 : T x = 0}, with extreme rays rho_i scaled to the least
    multiple whose rational part is integral.  Any minimal ray is either
    some rho_i or a combination sum(lam_i rho_i), lam_i < 1, over at most
    dim C of them; any minimal point is v + such a combination with v a
    vertex of {x >= 0 : T x = t_b}.  Otherwise subtracting a rho_i gives a
    smaller solution.

For rational data ``C`` is the orthant and the bound is the sum of the
orders of the ``p`` modulo ``Z^n``; the pigeonhole bound ``q^n`` (``q`` the
common denominator) is also applied there.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from cornerlab import exactlp, linalg, polyhedra
from cornerlab.model import PureInstance
from cornerlab.numctx import qlin_kernel, tag_matrix

DEFAULT_NODE_CAP = 2_000_000
DEFAULT_FACET_DIM_CAP = 8

IntVec = tuple[int, ...]


class EmptyCornerError(ValueError):
    """The corner polyhedron has no feasible point."""


class IncompleteError(RuntimeError):
    """An operation needs a certified-complete generator list."""


def default_node_cap() -> int:
    env = os.environ.get("CORNERLAB_CAP")
    return int(env) if env else DEFAULT_NODE_CAP


# ---------------------------------------------------------------------------
# data split into tag equations and congruence


@dataclass(frozen=True)
class GroupData:
    T: tuple[tuple[Fraction, ...], ...]  # rows: (coordinate, tag); cols: P
    t_b: tuple[Fraction, ...]
    Q: tuple[tuple[Fraction, ...], ...]  # n x |P| rational parts
    b_rat: tuple[Fraction, ...]


def group_data(inst: PureInstance) -> GroupData:
    ctx = inst.ctx
    k = len(inst.P)
    T = tag_matrix(list(inst.P) + [inst.b], ctx)
    rows = [r for r in T if any(r)]
    Tm = tuple(tuple(r[:k]) for r in rows)
    tb = tuple(r[k] for r in rows)
    Q = tuple(tuple(p[i].rat for p in inst.P) for i in range(inst.n))
    return GroupData(Tm, tb, Q, tuple(inst.b.rational_part()))


def affine_hull(inst: PureInstance) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational equations ``Theta y = d`` cutting out ``aff(I_b) cap V_P``.

    A greedy maximal subset ``I`` of ``P`` that is Q-independent modulo
    ``Q^n`` is chosen; row ``i`` evaluates the additive function that is 1
    on ``p_i``, 0 on the rest of ``I`` and on the rationals.  ``theta_i(b)``
    is read off ``b``'s tag part, completing ``I`` to a basis of the tag
    space with unit tag vectors when ``b`` is outside the span of ``P``.
    """
    ctx = inst.ctx
    cols = [p.tag_vector(ctx) for p in inst.P]
    bvec = inst.b.tag_vector(ctx)
    dim = len(bvec)
    chosen = linalg.independent_rows(cols) if dim else []
    if not chosen:
        return [], []
    units = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    pool = [cols[i] for i in chosen] + units
    basis = [pool[i] for i in linalg.independent_rows(pool)]
    # coordinates of a tag vector v in `basis`: solve basis^T c = v
    Bt = linalg.transpose(basis)
    k = len(chosen)
    theta = []
    coords = [linalg.solve(Bt, v) for v in cols]
    bcoords = linalg.solve(Bt, bvec)
    for i in range(k):
        theta.append([c[i] for c in coords])
    return theta, [bcoords[i] for i in range(k)]


# ---------------------------------------------------------------------------
# degree bound


def _cone_rays(T: Sequence[Sequence[Fraction]], k: int) -> list[tuple[Fraction, ...]]:
    """Extreme rays of ``{x >= 0 : T x = 0}`` in R^k."""
    N = linalg.nullspace([list(r) for r in T], k)  # basis vectors
    if not N:
        return []
    Ncols = linalg.transpose(N)  # k x dim
    ws = polyhedra.extreme_rays(Ncols, len(N))
    out = []
    for w in ws:
        x = [sum((N[j][i] * w[j] for j in range(len(N))), Fraction(0)) for i in range(k)]
        out.append(tuple(Fraction(v) for v in linalg.primitive_integer(x)))
    return sorted(out)


def _vertices(T, t, k: int) -> list[tuple[Fraction, ...]] | None:
    """Vertices of ``{x >= 0 : T x = t}``; None when empty."""
    Tl = [list(r) for r in T]
    x0 = linalg.solve(Tl, t) if Tl else [Fraction(0)] * k
    if x0 is None:
        return None
    N = linalg.nullspace(Tl, k)
    if not N:
        return [tuple(x0)] if all(v >= 0 for v in x0) else None
    Ncols = linalg.transpose(N)
    verts, _ = polyhedra.h_to_v(Ncols, [-v for v in x0], len(N))
    out = []
    for w in verts:
        out.append(tuple(x0[i] + sum((N[j][i] * w[j] for j in range(len(N))), Fraction(0)) for i in range(k)))
    return out or None


@dataclass(frozen=True)
class DegreeBounds:
    points: int | None  # None: no feasible point exists
    rays: int
    scaled_rays: tuple[IntVec, ...]


def degree_bounds(inst: PureInstance) -> DegreeBounds:
    g = group_data(inst)
    k = len(inst.P)
    rays = _cone_rays(g.T, k)
    scaled = []
    for r in rays:
        ratpart = [sum((g.Q[i][j] * r[j] for j in range(k)), Fraction(0)) for i in range(inst.n)]
        m = exactlp.period(ratpart)
        scaled.append(tuple(int(v * m) for v in r))
    dimC = k - linalg.rank([list(r) for r in g.T]) if g.T else k
    norms = sorted((sum(s) for s in scaled), reverse=True)
    ray_bound = sum(norms[:dimC])
    verts = _vertices(g.T, g.t_b, k)
    if verts is None:
        point_bound = None
    else:
        vmax = max(sum(v) for v in verts)
        point_bound = int(vmax) + ray_bound
    if inst.is_rational():
        q = linalg.common_denominator([*g.b_rat, *itertools.chain.from_iterable(g.Q)])
        pig = q ** inst.n
        ray_bound = min(ray_bound, pig)
        if point_bound is not None:
            point_bound = min(point_bound, pig - 1)
    return DegreeBounds(point_bound, ray_bound, tuple(scaled))


# ---------------------------------------------------------------------------
# enumeration


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _leq(a: IntVec, b: IntVec) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class Enumeration:
    elements: list[IntVec]
    complete: bool
    degree_bound: int | None
    explored_degree: int
    nodes: int


def _enumerate(inst: PureInstance, rays: bool, cap: int | None, node_cap: int) -> Enumeration:
    g = group_data(inst)
    k = len(inst.P)
    bounds = degree_bounds(inst)
    bound = bounds.rays if rays else bounds.points
    if bound is None:
        return Enumeration([], True, None, 0, 0)
    limit = bound if cap is None else min(cap, bound)
    tgt_rat = [Fraction(0)] * inst.n if rays else list(g.b_rat)
    tgt_tag = [Fraction(0)] * len(g.T) if rays else list(g.t_b)
    unit_rat = [tuple(g.Q[i][j] for i in range(inst.n)) for j in range(k)]
    unit_tag = [tuple(g.T[i][j] for i in range(len(g.T))) for j in range(k)]
    zero_state = (tuple(Fraction(0) for _ in range(inst.n)), tuple(Fraction(0) for _ in g.T))

    def step(state, j):
        rat, tag = state
        return (tuple(_frac(a + b) for a, b in zip(rat, unit_rat[j])),
                tuple(a + b for a, b in zip(tag, unit_tag[j])))

    start_state = (tuple(_frac(-v) for v in tgt_rat), tuple(-v for v in tgt_tag))
    origin = tuple([0] * k)
    kept: dict = {}
    if not rays:
        kept[start_state] = [origin]
    layer = {origin: start_state}
    found: list[IntVec] = []
    nodes = 0
    degree = 0
    complete = True
    while layer:
        if degree >= limit:
            complete = limit >= bound
            break
        nxt: dict = {}
        for y in sorted(layer):
            st = layer[y]
            for j in range(k):
                y2 = y[:j] + (y[j] + 1,) + y[j + 1:]
                if y2 not in nxt:
                    nxt[y2] = step(st, j)
        degree += 1
        layer = {}
        for y2 in sorted(nxt):
            nodes += 1
            if nodes > node_cap:
                return Enumeration(sorted(found), False, bound, degree, nodes)
            st = nxt[y2]
            if any(_leq(f, y2) for f in found):
                continue
            bucket = kept.setdefault(st, [])
            if any(_leq(v, y2) for v in bucket):
                continue
            if st == zero_state:
                found.append(y2)
                continue
            bucket.append(y2)
            layer[y2] = st
    return Enumeration(sorted(found), complete, bound, degree, nodes)


def minimal_points(inst: PureInstance, cap: int | None = None, node_cap: int | None = None) -> Enumeration:
    return _enumerate(inst, False, cap, node_cap or default_node_cap())


def minimal_rays(inst: PureInstance, cap: int | None = None, node_cap: int | None = None) -> Enumeration:
    return _enumerate(inst, True, cap, node_cap or default_node_cap())


# ---------------------------------------------------------------------------
# the polyhedron


@dataclass(frozen=True)
class CornerPolyhedron:
    instance: PureInstance
    E: tuple[IntVec, ...]
    rays: tuple[IntVec, ...]
    theta: tuple[tuple[Fraction, ...], ...]
    d: tuple[Fraction, ...]
    complete: bool
    bounds: DegreeBounds = field(repr=False)

    @property
    def dim_space(self) -> int:
        return len(self.instance.P)

    @property
    def empty(self) -> bool:
        return not self.E


def build(inst: PureInstance, cap: int | None = None, node_cap: int | None = None) -> CornerPolyhedron:
    pts = minimal_points(inst, cap, node_cap)
    rs = minimal_rays(inst, cap, node_cap)
    theta, d = affine_hull(inst)
    return CornerPolyhedron(
        inst, tuple(pts.elements), tuple(rs.elements),
        tuple(tuple(r) for r in theta), tuple(d),
        pts.complete and rs.complete, degree_bounds(inst),
    )


def _require_complete(cp: CornerPolyhedron):
    if not cp.complete:
        raise IncompleteError("generator enumeration was not certified complete")


def _require_nonempty(cp: CornerPolyhedron):
    if cp.empty:
        raise EmptyCornerError("C^P is empty")


@dataclass(frozen=True)
class RecessionCone:
    theta: tuple[tuple[Fraction, ...], ...]  # rec = {y >= 0 : theta y = 0}
    generators: tuple[IntVec, ...]


def recession_cone(cp: CornerPolyhedron) -> RecessionCone:
    """H-description ``{y >= 0, Theta y = 0}`` and its extreme generators,
    each the minimal ray on that extreme direction."""
    _require_nonempty(cp)
    k = cp.dim_space
    dirs = _cone_rays(cp.theta, k)
    gens = []
    for d in dirs:
        hits = [r for r in cp.rays if _parallel(r, d)]
        if cp.complete and not hits:
            raise AssertionError(f"extreme direction {d} has no minimal ray")
        if hits:
            gens.append(min(hits))
    return RecessionCone(cp.theta, tuple(sorted(gens)))


def _parallel(r: Sequence, d: Sequence) -> bool:
    support_r = [i for i, v in enumerate(r) if v]
    support_d = [i for i, v in enumerate(d) if v]
    if support_r != support_d:
        return False
    i0 = support_r[0]
    ratio = Fraction(r[i0]) / Fraction(d[i0])
    return ratio > 0 and all(Fraction(r[i]) == ratio * Fraction(d[i]) for i in range(len(r)))


def directions(cp: CornerPolyhedron) -> list[list[Fraction]]:
    e0 = cp.E[0]
    out = [[Fraction(a - b) for a, b in zip(e, e0)] for e in cp.E[1:]]
    out += [[Fraction(v) for v in r] for r in cp.rays]
    return out


def dimension(cp: CornerPolyhedron) -> int:
    _require_nonempty(cp)
    dirs = directions(cp)
    return linalg.rank(dirs) if dirs else 0


def aff_equations(cp: CornerPolyhedron) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Equations of ``aff(C^P)`` computed from the generators."""
    _require_nonempty(cp)
    k = cp.dim_space
    dirs = directions(cp)
    rows = linalg.nullspace(dirs, k) if dirs else [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    e0 = [Fraction(v) for v in cp.E[0]]
    return rows, [linalg.dot(r, e0) for r in rows]


@dataclass(frozen=True)
class RationalityReport:
    P_rational: bool
    rec_is_orthant: bool
    full_dimensional: bool
    dimension: int
    closure_equals_conv: bool  # condition (d); implied by the other three

    @property
    def agree(self) -> bool:
        return self.P_rational == self.rec_is_orthant == self.full_dimensional == self.closure_equals_conv


def rationality_report(cp: CornerPolyhedron) -> RationalityReport:
    _require_nonempty(cp)
    _require_complete(cp)
    k = cp.dim_space
    P_rat = all(p.is_rational() for p in cp.instance.P)
    orth = all(any(r[i] > 0 and sum(r) == r[i] for r in cp.rays) for i in range(k))
    dim = dimension(cp)
    rep = RationalityReport(P_rat, orth, dim == k, dim, orth)
    if not rep.agree:
        raise AssertionError(f"rationality conditions disagree: {rep}")
    return rep


# ---------------------------------------------------------------------------
# membership


@dataclass
class Membership:
    member: bool
    certificate: dict


def _membership(cp: CornerPolyhedron, y: Sequence, closure: bool) -> Membership:
    _require_complete(cp)
    y = [Fraction(v) for v in y]
    k = cp.dim_space
    if len(y) != k:
        raise ValueError("point has the wrong length")
    if cp.empty:
        return Membership(False, {"kind": "empty"})
    nE, nR = len(cp.E), len(cp.rays)
    nv = nE + nR + (k if closure else 0)
    A = []
    for i in range(k):
        row = [Fraction(e[i]) for e in cp.E] + [Fraction(r[i]) for r in cp.rays]
        if closure:
            row += [Fraction(int(i == j)) for j in range(k)]
        A.append(row)
    A.append([Fraction(1)] * nE + [Fraction(0)] * (nv - nE))
    lp = exactlp.LinearProgram([0] * nv, A, ["="] * (k + 1), y + [Fraction(1)])
    out = exactlp.solve_lp(lp)
    if out.status == exactlp.OPTIMAL:
        cert = {"kind": "combination", "lambda": out.x[:nE], "mu": out.x[nE:nE + nR]}
        if closure:
            cert["slack"] = out.x[nE + nR:]
        return Membership(True, cert)
    w = out.certificate["y"]
    # Farkas: w.(gen) <= 0 on every generator column and w.(y,1) > 0, so
    # a := -w[:k], a0 := w[k] gives a.e >= a0, a.r >= 0 (and a >= 0 in the
    # closure case) while a.y < a0.
    a = [-v for v in w[:k]]
    a0 = w[k]
    return Membership(False, {"kind": "separator", "a": a, "a0": a0})


def member_conv(cp: CornerPolyhedron, y) -> Membership:
    return _membership(cp, y, closure=False)


def member_closure(cp: CornerPolyhedron, y) -> Membership:
    return _membership(cp, y, closure=True)


def verify_membership(cp: CornerPolyhedron, y, m: Membership, closure: bool) -> bool:
    y = [Fraction(v) for v in y]
    c = m.certificate
    if m.member:
        lam, mu = c["lambda"], c["mu"]
        slack = c.get("slack", [Fraction(0)] * len(y)) if closure else [Fraction(0)] * len(y)
        if any(v < 0 for v in [*lam, *mu, *slack]) or sum(lam) != 1:
            return False
        for i in range(len(y)):
            tot = sum((l * e[i] for l, e in zip(lam, cp.E)), Fraction(0))
            tot += sum((u * r[i] for u, r in zip(mu, cp.rays)), Fraction(0)) + slack[i]
            if tot != y[i]:
                return False
        return True
    if c["kind"] == "empty":
        return cp.empty
    a, a0 = c["a"], c["a0"]
    if closure and any(v < 0 for v in a):
        return False
    return (all(linalg.dot(a, e) >= a0 for e in cp.E)
            and all(linalg.dot(a, r) >= 0 for r in cp.rays)
            and linalg.dot(a, y) < a0)


def check_aff_intersection(cp: CornerPolyhedron, samples) -> tuple[bool, list[dict]]:
    """``C^P = G_b cap aff(C^P)`` on the given points."""
    _require_complete(cp)
    _require_nonempty(cp)
    rows, rhs = aff_equations(cp)
    details = []
    ok = True
    for y in samples:
        y = [Fraction(v) for v in y]
        lhs = member_conv(cp, y).member
        on_aff = all(linalg.dot(r, y) == v for r, v in zip(rows, rhs))
        rhs_ok = member_closure(cp, y).member and on_aff
        details.append({"y": y, "conv": lhs, "closure_and_aff": rhs_ok})
        ok = ok and lhs == rhs_ok
    return ok, details


# ---------------------------------------------------------------------------
# facets


@dataclass(frozen=True)
class Facet:
    """``coeffs . y >= rhs``; rhs in {-1, 0, 1}."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction

    def value(self, y) -> Fraction:
        return linalg.dot(self.coeffs, [Fraction(v) for v in y])


def _normalize_facet(a: Sequence[Fraction], a0: Fraction) -> Facet:
    if a0 != 0:
        s = abs(a0)
        return Facet(tuple(Fraction(v) / s for v in a), a0 / s)
    return Facet(tuple(Fraction(v) for v in linalg.primitive_integer(a)), Fraction(0))


def facets(cp: CornerPolyhedron, dim_cap: int = DEFAULT_FACET_DIM_CAP) -> list[Facet]:
    """Irredundant facets of ``conv(E) + cone(rays)`` relative to its affine
    hull, computed by double description in quotient coordinates."""
    _require_complete(cp)
    _require_nonempty(cp)
    k = cp.dim_space
    if k > dim_cap:
        raise ValueError(f"|P| = {k} exceeds the facet dimension cap {dim_cap}")
    dirs = directions(cp)
    basis, pivots = linalg.rref(dirs) if dirs else ([], [])
    m = len(pivots)
    if m == 0:
        return []
    e0 = [Fraction(v) for v in cp.E[0]]
    pts = [tuple(Fraction(e[p]) - e0[p] for p in pivots) for e in cp.E]
    rays = [tuple(Fraction(r[p]) for p in pivots) for r in cp.rays]
    out = []
    for a, a0 in polyhedra.v_to_h(pts, rays, m):
        coeffs = [Fraction(0)] * k
        for ai, p in zip(a, pivots):
            coeffs[p] = ai
        rhs = a0 + sum((ai * e0[p] for ai, p in zip(a, pivots)), Fraction(0))
        out.append(_normalize_facet(coeffs, rhs))
    return sorted(set(out), key=lambda f: (f.rhs, f.coeffs))
