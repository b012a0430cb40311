"""Reproducible pathologies of the group relaxations.

``not_closed_sequence``: with ``R = {-1}``, ``P = {b, w}`` (``w``
irrational) the face ``conv(M_b) cap V_{R,P}`` is not closed.  The target
``s(-1) = 0, y(b) = y(w) = 1`` is not in the face, yet for every ``eps`` the
face contains a point within ``eps`` of it.

``pure_integer_example``: with ``P = {b, w, 1 - w}`` the corner polyhedron
lies in the plane ``y_w = y_{1-w}``, so it is strictly smaller than its
closure in ``V_P``, whose recession cone is the whole orthant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from cornerlab import hull, linalg, polyhedra
from cornerlab.model import MixedInstance, MixedSolution, PureInstance, check_feasible, rational_vector
from cornerlab.numctx import GroupReal, GroupVector, NumberContext, enclose

DEFAULT_SCAN_CAP = 10**6
TARGET_ENUM_CAP = 12


def _context(omega: str) -> NumberContext:
    return NumberContext.from_symbols([omega])


@dataclass(frozen=True)
class NotClosedWitness:
    epsilon: Fraction
    k: int  # y_hat(w)
    hat_s: GroupReal  # frac(k w)
    distance: tuple[Fraction, Fraction]
    instance: MixedInstance
    hat: MixedSolution
    tilde: MixedSolution
    weights: tuple[Fraction, Fraction]
    combination: tuple[GroupReal, GroupReal, GroupReal]  # (s(-1), y(b), y(w))
    checks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "epsilon": str(self.epsilon), "k": self.k, "hat_s": self.hat_s.to_json(),
            "distance": [str(self.distance[0]), str(self.distance[1])],
            "hat": {"s": [v.to_json() for v in self.hat.s], "y": list(self.hat.y)},
            "tilde": {"s": [v.to_json() for v in self.tilde.s], "y": list(self.tilde.y)},
            "weights": [str(w) for w in self.weights],
            "combination": [v.to_json() for v in self.combination],
            "checks": self.checks, "verified": self.verified,
        }


def not_closed_instance(omega: str = "sqrt2", b=Fraction(1, 2)) -> MixedInstance:
    ctx = _context(omega)
    return MixedInstance(rational_vector(b), (rational_vector(b), GroupVector([ctx.tag(omega)])), (rational_vector(-1),))


def target_infeasible(inst: MixedInstance, cap: int = TARGET_ENUM_CAP) -> bool:
    """No point of M_b with ``s = 0`` has ``y(w) > 0``, so no convex
    combination reaches ``y(w) = 1`` with ``s = 0``.

    Exact argument: with ``s = 0`` the tag part of ``b y_b + w y_w`` is
    ``y_w * w``, which must vanish.  The bounded enumeration re-checks this
    with the feasibility predicate.
    """
    w = inst.P[1]
    if w.is_rational() or not inst.P[0].is_rational():
        return False
    zero = (GroupReal(0),)
    for yb, yw in itertools.product(range(cap + 1), range(1, cap + 1)):
        if check_feasible(inst, MixedSolution(zero, (yb, yw))):
            return False
    return True


def not_closed_sequence(epsilon, omega: str = "sqrt2", b=Fraction(1, 2),
                        cap: int = DEFAULT_SCAN_CAP) -> NotClosedWitness:
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    b = Fraction(b)
    if not 0 < b < 1:
        raise ValueError("b must lie in (0, 1)")
    inst = not_closed_instance(omega, b)
    w = inst.P[1][0]
    for k in range(1, cap + 1):
        hat_s = (w * k).frac()
        if hat_s <= epsilon:
            break
    else:
        raise RuntimeError(f"no k <= {cap} with frac(k w) <= {epsilon}")
    hat = MixedSolution((hat_s,), (1, k))
    tilde = MixedSolution((GroupReal(0),), (1, 0))
    weights = (Fraction(1, k), Fraction(k - 1, k))
    comb = (hat_s * weights[0], GroupReal(1), GroupReal(1))
    dist = hat_s / k  # only s(-1) differs from the target
    width = epsilon
    while True:
        lo, hi = enclose(dist, width)
        lo = max(lo, Fraction(0))
        if hi <= epsilon:
            break
        width /= 2
    recombined = (
        hat.s[0] * weights[0] + tilde.s[0] * weights[1],
        GroupReal(hat.y[0] * weights[0] + tilde.y[0] * weights[1]),
        GroupReal(hat.y[1] * weights[0] + tilde.y[1] * weights[1]),
    )
    checks = {
        "hat_feasible": check_feasible(inst, hat),
        "tilde_feasible": check_feasible(inst, tilde),
        "weights_convex": sum(weights) == 1 and min(weights) >= 0,
        "combination_matches": recombined == comb,
        "distance_within_epsilon": dist <= epsilon and hi <= epsilon,
        "target_infeasible": target_infeasible(inst),
    }
    return NotClosedWitness(epsilon, k, hat_s, (lo, hi), inst, hat, tilde, weights, comb, checks)


@dataclass
class PureIntegerReport:
    instance: PureInstance
    cp: hull.CornerPolyhedron
    aff_rows: list[list[Fraction]]
    aff_rhs: list[Fraction]
    rec_generators: list[tuple[int, ...]]
    witness: tuple[int, ...] | None
    checks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "P_order": ["b", "omega", "1-omega"],
            "E": [list(e) for e in self.cp.E], "rays": [list(r) for r in self.cp.rays],
            "aff": {"Theta": [[str(v) for v in r] for r in self.aff_rows], "d": [str(v) for v in self.aff_rhs]},
            "rec_generators": [list(g) for g in self.rec_generators],
            "witness": None if self.witness is None else list(self.witness),
            "complete": self.cp.complete, "checks": self.checks, "verified": self.verified,
        }


def pure_integer_instance(b=Fraction(1, 2), omega: str = "sqrt2") -> PureInstance:
    ctx = _context(omega)
    w = ctx.tag(omega)
    return PureInstance(rational_vector(b), (rational_vector(b), GroupVector([w]), GroupVector([1 - w])))


def _proportional(u, v) -> bool:
    return linalg.rank([list(map(Fraction, u)), list(map(Fraction, v))]) == 1


def pure_integer_example(b=Fraction(1, 2), omega: str = "sqrt2", scan: int = 3) -> PureIntegerReport:
    """Coordinates are ordered ``(y_b, y_w, y_{1-w})``."""
    b = Fraction(b)
    if b.denominator == 1:
        raise ValueError("b must not be an integer")
    inst = pure_integer_instance(b, omega)
    cp = hull.build(inst)
    theta, d = hull.affine_hull(inst)
    rec = hull.recession_cone(cp)
    expected = [Fraction(0), Fraction(1), Fraction(-1)]
    # rec should be {y >= 0 : y_w = y_{1-w}}: compare extreme directions
    target_dirs = polyhedra.extreme_rays(
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, -1], [0, -1, 1]], 3)
    gen_dirs = sorted(tuple(Fraction(v) for v in linalg.primitive_integer(g)) for g in rec.generators)
    rat = hull.rationality_report(cp)
    witness = None
    for y in sorted(itertools.product(range(scan + 1), repeat=3), key=lambda t: (sum(t), t)):
        if hull.member_closure(cp, y).member and not hull.member_conv(cp, y).member:
            witness = y
            break
    checks = {
        "complete": cp.complete,
        "one_aff_equation": len(theta) == 1,
        "aff_equation_is_y_w_minus_y_1mw": len(theta) == 1 and _proportional(theta[0], expected) and d[0] == 0,
        "rec_cone_is_plane_section": gen_dirs == sorted(target_dirs),
        "rec_H_matches": len(rec.theta) == 1 and _proportional(rec.theta[0], expected),
        "strict_containment_witness": witness is not None,
        "rationality_all_false": not (rat.P_rational or rat.rec_is_orthant or rat.full_dimensional),
    }
    return PureIntegerReport(inst, cp, theta, d, list(rec.generators), witness, checks)
