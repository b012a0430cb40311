"""Trivial lifting of finite inequalities ``(h, d)`` on ``(R, P)``.

All models here have rational data.  With ``h, d >= 0`` every objective is
bounded below, and the models become finite MIPs as follows:

* ``pi(p)``: minimise ``h.s + d.y`` subject to ``R s + P y = p``.  The
  value at ``y = 0`` is ``psi(p)``, so the search is restricted to
  ``h.s + d.y <= psi(p)`` and each ``y_j`` is boxed by an LP maximum over
  that region.
* validity: minimise ``h.s + d.y`` subject to ``R s + P y - z = b`` with
  ``z`` integral.  Each ``y_p`` is boxed to ``[0, order(p) - 1]`` (lowering
  ``y_p`` by its order changes the left side by an integer vector at no
  gain in cost).  Then ``h.s <= psi(b)`` at an optimum, which boxes ``z``
  through the LP maxima of ``|(R s)_i|`` over ``h.s <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from cornerlab import exactlp, linalg
from cornerlab.hull import CornerPolyhedron, Facet, _require_complete, _require_nonempty
from cornerlab.model import MixedInstance, MixedSolution, TupleRestriction, check_feasible
from cornerlab.numctx import GroupVector

MAX_DOUBLINGS = 40


class LiftError(ValueError):
    pass


def _rows(vectors: Sequence[GroupVector], n: int) -> list[list[Fraction]]:
    """Matrix with the given vectors as columns (rational parts)."""
    return [[v[i].rat for v in vectors] for i in range(n)]


def _positively_spans(R: Sequence[GroupVector], n: int) -> bool:
    A = _rows(R, n)
    for i in range(n):
        for sign in (1, -1):
            rhs = [Fraction(sign * (i == j)) for j in range(n)]
            out = exactlp.solve_lp(exactlp.LinearProgram([0] * len(R), A, ["="] * n, rhs))
            if out.status != exactlp.OPTIMAL:
                return False
    return True


@dataclass(frozen=True)
class LiftData:
    inst: MixedInstance
    h: tuple[Fraction, ...]
    d: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(Fraction(v) for v in self.h))
        object.__setattr__(self, "d", tuple(Fraction(v) for v in self.d))
        if not self.inst.is_rational() or not all(r.is_rational() for r in self.inst.R):
            raise LiftError("lifting models need rational data")
        if len(self.h) != len(self.inst.R) or len(self.d) != len(self.inst.P):
            raise LiftError("h must be indexed by R and d by P")
        if any(v < 0 for v in (*self.h, *self.d)):
            raise LiftError("h and d must be nonnegative")
        if not _positively_spans(self.inst.R, self.inst.n):
            raise LiftError("R must positively span R^n")

    @property
    def n(self) -> int:
        return self.inst.n

    def to_json(self) -> dict:
        out = self.inst.to_json()
        out["h"] = [str(v) for v in self.h]
        out["d"] = [str(v) for v in self.d]
        return out


def _rational_point(p, n: int) -> list[Fraction]:
    if isinstance(p, GroupVector):
        if not p.is_rational():
            raise LiftError("point is not in the rational span of R")
        return p.rational_part()
    p = [Fraction(v) for v in p]
    if len(p) != n:
        raise LiftError("point has the wrong dimension")
    return p


def trivial_psi(ld: LiftData, r) -> Fraction:
    """Gauge ``min h.s`` subject to ``R s = r``, ``s >= 0``."""
    r = _rational_point(r, ld.n)
    lp = exactlp.LinearProgram(list(ld.h), _rows(ld.inst.R, ld.n), ["="] * ld.n, r)
    out = exactlp.solve_lp(lp)
    if out.status != exactlp.OPTIMAL:
        raise LiftError(f"psi LP is {out.status}")
    return out.value


class CapExceeded(RuntimeError):
    pass


def _lp_max(c, A, senses, rhs, lower, upper) -> Fraction | None:
    out = exactlp.solve_lp(exactlp.LinearProgram([-v for v in c], A, senses, rhs, lower, upper))
    if out.status == exactlp.UNBOUNDED:
        return None
    if out.status != exactlp.OPTIMAL:
        raise LiftError(f"bounding LP is {out.status}")
    return -out.value


def trivial_pi(ld: LiftData, p, node_cap: int = exactlp.DEFAULT_NODE_CAP) -> Fraction:
    """``min h.s + d.y`` subject to ``R s + P y = p``, ``y`` integral."""
    p = _rational_point(p, ld.n)
    nR, nP = len(ld.inst.R), len(ld.inst.P)
    U = trivial_psi(ld, p)
    A = [rr + pr for rr, pr in zip(_rows(ld.inst.R, ld.n), _rows(ld.inst.P, ld.n))]
    cost = list(ld.h) + list(ld.d)
    senses = ["="] * ld.n + ["<="]
    A_cut = A + [cost]
    rhs = p + [U]
    lower = [Fraction(0)] * (nR + nP)
    upper: list = [None] * (nR + nP)
    for j in range(nP):
        e = [Fraction(0)] * (nR + nP)
        e[nR + j] = Fraction(1)
        m = _lp_max(e, A_cut, senses, rhs, lower, [None] * (nR + nP))
        if m is not None:
            upper[nR + j] = Fraction(math.floor(m))
    lp = exactlp.LinearProgram(cost, A, ["="] * ld.n, p, lower, upper)
    out = exactlp.solve_mip(exactlp.MipProblem(lp, [False] * nR + [True] * nP), node_cap)
    if out.status == exactlp.CAP_EXCEEDED:
        raise CapExceeded(f"pi MIP exceeded {node_cap} nodes")
    if out.status != exactlp.OPTIMAL:
        raise LiftError(f"pi MIP is {out.status}")
    return out.value


@dataclass
class ValidityResult:
    valid: bool | None  # None when the node cap was hit
    optimum: Fraction | None
    alpha: Fraction
    minimizer: MixedSolution | None
    z: list[Fraction] | None
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "valid": self.valid, "alpha": str(self.alpha),
            "optimum": None if self.optimum is None else str(self.optimum),
            "minimizer": None if self.minimizer is None else
            {"s": [str(v) for v in self.minimizer.s], "y": list(self.minimizer.y)},
            "z": None if self.z is None else [str(v) for v in self.z],
            "certificate": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.certificate.items()},
        }


def _ray_bounds(ld: LiftData) -> list[Fraction | None]:
    """``max |(R s)_i|`` over ``s >= 0``, ``h.s <= 1`` (None if unbounded)."""
    rows = _rows(ld.inst.R, ld.n)
    nR = len(ld.inst.R)
    out = []
    for i in range(ld.n):
        best = Fraction(0)
        for sign in (1, -1):
            m = _lp_max([sign * v for v in rows[i]], [list(ld.h)], ["<="], [Fraction(1)],
                        [Fraction(0)] * nR, [None] * nR)
            if m is None:
                best = None
                break
            best = max(best, m)
        out.append(best)
    return out


def validity_oracle(ld: LiftData, alpha, node_cap: int = exactlp.DEFAULT_NODE_CAP) -> ValidityResult:
    """Is ``h.s + d.y >= alpha`` on every ``(s, y)`` with ``R s + P y`` in ``b + Z^n``?"""
    alpha = Fraction(alpha)
    n, nR, nP = ld.n, len(ld.inst.R), len(ld.inst.P)
    b = ld.inst.b.rational_part()
    Rr, Pr = _rows(ld.inst.R, n), _rows(ld.inst.P, n)
    ybox = exactlp.periodicity_bounds([p.rational_part() for p in ld.inst.P], ld.d)
    U = trivial_psi(ld, b)
    tb = _ray_bounds(ld)
    zlo: list = []
    zhi: list = []
    for i in range(n):
        if tb[i] is None:
            zlo.append(None)
            zhi.append(None)
            continue
        span = abs(b[i]) + U * tb[i] + sum(abs(Pr[i][j]) * ybox[j] for j in range(nP))
        zlo.append(Fraction(-math.ceil(span)))
        zhi.append(Fraction(math.ceil(span)))
    A = [Rr[i] + Pr[i] + [Fraction(-(i == k)) for k in range(n)] for i in range(n)]
    cost = list(ld.h) + list(ld.d) + [Fraction(0)] * n
    lower = [Fraction(0)] * (nR + nP) + zlo
    upper = [None] * nR + [Fraction(v) for v in ybox] + zhi
    lp = exactlp.LinearProgram(cost, A, ["="] * n, b, lower, upper)
    mip = exactlp.MipProblem(lp, [False] * nR + [True] * (nP + n))
    out = exactlp.solve_mip(mip, node_cap)
    if out.status == exactlp.CAP_EXCEEDED:
        return ValidityResult(None, None, alpha, None, None, dict(out.certificate))
    if out.status != exactlp.OPTIMAL:
        raise LiftError(f"validity MIP is {out.status}")
    x = out.x
    sol = MixedSolution(tuple(x[:nR]), tuple(int(v) for v in x[nR:nR + nP]))
    if not check_feasible(ld.inst, sol):
        raise AssertionError("validity minimizer is infeasible")
    cert = {"kind": "exhausted-branch-and-bound", "nodes": out.certificate.get("nodes"),
            "y_box": [str(v) for v in ybox]}
    return ValidityResult(out.value >= alpha, out.value, alpha, sol, x[nR + nP:], cert)


# ---------------------------------------------------------------------------
# facet domination


def unit_directions(n: int) -> tuple[GroupVector, ...]:
    out = []
    for i in range(n):
        for sign in (1, -1):
            out.append(GroupVector.rational([sign * (i == j) for j in range(n)]))
    return tuple(out)


@dataclass
class Domination:
    M: Fraction
    data: LiftData
    psi: Callable
    pi: Callable
    psi_on_R: list[Fraction]
    pi_on_P: list[Fraction]
    dominates: bool
    tight: list[bool]
    data_validity: ValidityResult
    tuple_validity: ValidityResult

    def to_json(self) -> dict:
        return {
            "M": str(self.M), "psi_on_R": [str(v) for v in self.psi_on_R],
            "pi_on_P": [str(v) for v in self.pi_on_P], "d": [str(v) for v in self.data.d],
            "dominates": self.dominates, "tight": self.tight,
            "data_valid": self.data_validity.valid, "tuple_valid": self.tuple_validity.valid,
        }


def facet_dominate(cp: CornerPolyhedron, facet: Facet, R: Sequence[GroupVector] | None = None,
                   node_cap: int = exactlp.DEFAULT_NODE_CAP) -> Domination:
    """Lift ``d.y >= 1`` with uniform ``h = M`` (doubling ``M``) and return
    the trivial-lifting pair with its domination report."""
    _require_complete(cp)
    _require_nonempty(cp)
    inst = cp.instance
    if not inst.is_rational():
        raise LiftError("facet lifting needs rational P")
    if facet.rhs != 1:
        raise LiftError("facet must have right-hand side 1 (others are valid for the orthant)")
    d = list(facet.coeffs)
    if any(v < 0 for v in d):
        raise LiftError("facet coefficients must be nonnegative")
    if any(facet.value(e) < 1 for e in cp.E) or any(facet.value(r) < 0 for r in cp.rays):
        raise LiftError("inequality is not valid for the corner polyhedron")
    R = tuple(R) if R is not None else unit_directions(inst.n)
    mixed = MixedInstance(inst.b, inst.P, R)
    M = Fraction(1)
    for _ in range(MAX_DOUBLINGS + 1):
        ld = LiftData(mixed, [M] * len(R), d)
        res = validity_oracle(ld, 1, node_cap)
        if res.valid is None:
            raise CapExceeded("validity oracle hit the node cap")
        if res.valid:
            break
        M *= 2
    else:
        raise CapExceeded(f"no valid uniform M up to 2^{MAX_DOUBLINGS}")
    psi_R = [trivial_psi(ld, r) for r in R]
    pi_P = [trivial_pi(ld, p, node_cap) for p in inst.P]
    tup = validity_oracle(LiftData(mixed, psi_R, pi_P), 1, node_cap)
    return Domination(
        M, ld,
        lambda r: trivial_psi(ld, r),
        lambda p: trivial_pi(ld, p, node_cap),
        psi_R, pi_P,
        all(a <= b for a, b in zip(pi_P, d)),
        [a == b for a, b in zip(pi_P, d)],
        res, tup,
    )


# ---------------------------------------------------------------------------
# separation


def separate_from_closure(cp: CornerPolyhedron, y) -> TupleRestriction | str:
    """A restriction ``d.y >= 1`` (``d >= 0``) valid on C^P and violated at
    ``y``, or ``"member"`` when ``y`` lies in the closure."""
    _require_complete(cp)
    y = [Fraction(v) for v in y]
    k = cp.dim_space
    if cp.empty:
        raise LiftError("C^P is empty")
    A = [[Fraction(v) for v in e] for e in cp.E] + [[Fraction(v) for v in r] for r in cp.rays]
    senses = [">="] * len(A)
    rhs = [Fraction(1)] * len(cp.E) + [Fraction(0)] * len(cp.rays)
    out = exactlp.solve_lp(exactlp.LinearProgram(y, A, senses, rhs))
    if out.status == exactlp.OPTIMAL:
        if out.value >= 1:
            return "member"
        dvec = out.x
    elif out.status == exactlp.UNBOUNDED:
        d0, w = out.certificate["x"], out.certificate["direction"]
        slope = linalg.dot(w, y)  # negative
        t = max(Fraction(0), (linalg.dot(d0, y) - 1) / -slope) + 1
        dvec = [a + t * b for a, b in zip(d0, w)]
    else:
        raise AssertionError("separation LP cannot be infeasible: large multiples of 1 are feasible")
    ok = (all(v >= 0 for v in dvec)
          and all(linalg.dot(dvec, e) >= 1 for e in cp.E)
          and all(linalg.dot(dvec, r) >= 0 for r in cp.rays)
          and linalg.dot(dvec, y) < 1)
    if not ok:
        raise AssertionError("separator failed re-verification")
    return TupleRestriction(tuple(dvec), Fraction(1))
