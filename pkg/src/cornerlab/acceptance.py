"""The acceptance suite: twelve exact checks with time budgets.

Each ``criterion_*`` returns a :class:`CriterionResult`; ``run_all`` runs
them in order.  Shared by ``cornerlab selftest`` and the test-suite.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from cornerlab import exactlp, examples, gjfun, hull, lift, linalg, oracles, suite
from cornerlab.model import MixedInstance, rational_vector
from cornerlab.numctx import NumberContext


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float | None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed and (self.limit is None or self.seconds < self.limit)

    def line(self) -> str:
        budget = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}: {self.seconds:.2f}s{budget}"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.ok,
                "checks_passed": self.passed, "seconds": round(self.seconds, 3),
                "limit": self.limit, "details": self.details}


def _timed(number: int, name: str, limit: float | None, body: Callable[[], tuple[bool, dict]]) -> CriterionResult:
    t0 = time.perf_counter()
    passed, details = body()
    return CriterionResult(number, name, passed, time.perf_counter() - t0, limit, details)


def _common_q(inst) -> int:
    return linalg.common_denominator([v.rat for p in (inst.b, *inst.P) for v in p])


# ---------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    def body():
        rep = examples.pure_integer_example(Fraction(1, 2), "sqrt2")
        keys = ["complete", "one_aff_equation", "aff_equation_is_y_w_minus_y_1mw",
                "rec_cone_is_plane_section", "rec_H_matches"]
        return all(rep.checks[k] for k in keys), {k: rep.checks[k] for k in keys}
    return _timed(1, "pure-integer example: affine hull and recession cone", 1.0, body)


def criterion_2() -> CriterionResult:
    def body():
        out = {}
        for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
            w = examples.not_closed_sequence(eps)
            out[str(eps)] = {"k": w.k, "verified": w.verified, "distance_hi": str(w.distance[1])}
        return all(v["verified"] for v in out.values()), out
    return _timed(2, "non-closed face: epsilon-close certified combinations", 5.0, body)


def criterion_3() -> CriterionResult:
    def body():
        insts = suite.rational_suite()
        bad = 0
        rays = 0
        for inst in insts:
            cp = hull.build(inst)
            if not cp.complete:
                bad += 1
            for r in cp.rays:
                rays += 1
                if any(v < 0 for v in r) or not any(r) or not oracles.is_ray(inst, r):
                    bad += 1
        return bad == 0 and len(insts) >= 50, {"instances": len(insts), "rays": rays, "violations": bad}
    return _timed(3, "minimal rays are integral lattice rays", 60.0, body)


def criterion_4() -> CriterionResult:
    def body():
        rat_ok = irr_ok = 0
        rats = suite.rational_suite()
        irrs = suite.irrational_suite()
        for inst in rats:
            r = hull.rationality_report(hull.build(inst))
            rat_ok += r.P_rational and r.rec_is_orthant and r.full_dimensional
        for inst in irrs:
            r = hull.rationality_report(hull.build(inst))
            irr_ok += not (r.P_rational or r.rec_is_orthant or r.full_dimensional)
        passed = rat_ok == len(rats) and irr_ok == len(irrs) >= 10
        return passed, {"rational_all_true": f"{rat_ok}/{len(rats)}", "irrational_all_false": f"{irr_ok}/{len(irrs)}"}
    return _timed(4, "rationality conditions agree", None, body)


def criterion_5() -> CriterionResult:
    def body():
        checked = mism = 0
        for inst in suite.rational_suite():
            q = _common_q(inst)
            if q > 5 or len(inst.P) > 3:
                continue
            checked += 1
            cp = hull.build(inst)
            total = q ** inst.n
            if (list(cp.E) != oracles.brute_minimal_points(inst, total)
                    or list(cp.rays) != oracles.brute_minimal_rays(inst, total)):
                mism += 1
        return mism == 0 and checked > 0, {"checked": checked, "mismatches": mism}
    return _timed(5, "enumeration equals brute force", None, body)


def criterion_6() -> CriterionResult:
    def body():
        out = {}
        ok = True
        for b in (Fraction(1, 4), Fraction(2, 5), Fraction(3, 7)):
            t0 = time.perf_counter()
            f = gjfun.gmic(b)
            minimal = gjfun.check_minimal_pure(f, b).minimal
            liftable, psi = gjfun.check_liftable(f, b)
            psi_ok = psi == gjfun.SublinearOneD(1 / b, 1 / (1 - b))
            half = gjfun.check_minimal_pure(f.scaled(Fraction(1, 2)), b)
            sp = suite.spiked(f, b)
            sub, wit = gjfun.check_subadditive(sp)
            wit_ok = wit is not None and sp(wit[0]) + sp(wit[1]) < sp(wit[0] + wit[1])
            secs = time.perf_counter() - t0
            row = {"minimal": minimal, "liftable": liftable, "psi": psi_ok,
                   "half_fails_symmetry": not half.symmetric, "spike_fails": not sub and wit_ok,
                   "under_1s": secs < 1}
            out[str(b)] = row
            ok = ok and all(row.values())
        return ok, out
    return _timed(6, "Gomory-Johnson checks on GMIC, scaled and spiked functions", None, body)


def criterion_7() -> CriterionResult:
    def body():
        fs = suite.minimal_function_suite()
        bad = 0
        for f, b in fs:
            _, psi = gjfun.check_liftable(f, b)
            L = psi.lipschitz
            if not all(-L <= s <= L for s in f.slopes):
                bad += 1
        return bad == 0 and len(fs) > 0, {"functions": len(fs), "violations": bad}
    return _timed(7, "slopes of minimal liftable functions lie in [-L, L]", None, body)


def criterion_8() -> CriterionResult:
    def body():
        ctx = NumberContext.sqrt(2)
        base = gjfun.gmic(Fraction(2, 5))
        out = {}
        ok = True
        for c in (Fraction(1, 3), Fraction(-2, 7)):
            g = gjfun.ShiftedFunction(base, gjfun.AdditiveFunction({"sqrt2": c}, ctx))
            try:
                est = gjfun.extract_theta(g, 1000)["sqrt2"]  # asserts the sandwich at every k
                row = {"within": est.within_bound(), "bound": str(est.error_bound), "sandwich": True}
            except gjfun.SandwichViolation as e:
                row = {"within": False, "sandwich": False, "error": str(e)}
            out[str(c)] = row
            ok = ok and row["within"] and row["sandwich"] and est.error_bound == Fraction(1, 1000)
        return ok, out
    return _timed(8, "additive shift recovered within max(pi0)/K", None, body)


def _gmic_lift_data(b: Fraction, P) -> lift.LiftData:
    f = gjfun.gmic(b)
    s = gjfun.slope_lift(f)
    inst = MixedInstance(rational_vector(b), tuple(rational_vector(p) for p in P),
                         (rational_vector(1), rational_vector(-1)))
    return lift.LiftData(inst, (s.s_plus, s.s_minus), tuple(f(p) for p in P))


def criterion_9() -> CriterionResult:
    def body():
        rng = random.Random(11)
        cases = [(Fraction(2, 5), [Fraction(1, 5), Fraction(2, 5), Fraction(3, 5)]),
                 (Fraction(1, 4), [Fraction(1, 4), Fraction(1, 2)]),
                 (Fraction(3, 7), [Fraction(1, 7), Fraction(3, 7), Fraction(5, 7)])]
        homog = subadd = below = valid = True
        pairs = 0
        for b, P in cases:
            ld = _gmic_lift_data(b, P)
            for _ in range(34):
                r1 = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                r2 = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
                p1, p2 = lift.trivial_psi(ld, [r1]), lift.trivial_psi(ld, [r2])
                homog &= lift.trivial_psi(ld, [lam * r1]) == lam * p1
                subadd &= p1 + p2 >= lift.trivial_psi(ld, [r1 + r2])
                pairs += 1
            psi_R = [lift.trivial_psi(ld, r) for r in ld.inst.R]
            pi_P = [lift.trivial_pi(ld, p) for p in ld.inst.P]
            below &= all(a <= lift.trivial_psi(ld, p) for a, p in zip(pi_P, ld.inst.P))
            res = lift.validity_oracle(lift.LiftData(ld.inst, psi_R, pi_P), 1)
            valid &= bool(res.valid)
        passed = homog and subadd and below and valid and pairs >= 100
        return passed, {"pairs": pairs, "homogeneous": homog, "subadditive": subadd,
                        "pi_le_psi": below, "valid": valid}
    return _timed(9, "trivial lifting: homogeneity, subadditivity, validity", 30.0, body)


def criterion_10() -> CriterionResult:
    def body():
        n_facets = bad = 0
        for inst in suite.rational_suite():
            if len(inst.P) > 3:
                continue
            cp = hull.build(inst)
            for f in hull.facets(cp):
                if f.rhs != 1:
                    continue
                n_facets += 1
                dom = lift.facet_dominate(cp, f)
                if not (dom.data_validity.valid and dom.tuple_validity.valid and dom.dominates):
                    bad += 1
        return bad == 0 and n_facets > 0, {"facets": n_facets, "failures": bad}
    return _timed(10, "facet domination by trivial liftings", 120.0, body)


def _samples(cp: hull.CornerPolyhedron, rng: random.Random, count: int) -> list[list[Fraction]]:
    k = cp.dim_space
    rows, rhs = hull.aff_equations(cp)
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0:  # convex combination plus rays: member
            lam = [Fraction(rng.randint(0, 4)) for _ in cp.E]
            if not any(lam):
                lam[0] = Fraction(1)
            tot = sum(lam)
            y = [sum((l / tot * e[j] for l, e in zip(lam, cp.E)), Fraction(0)) for j in range(k)]
            for r in cp.rays:
                mu = Fraction(rng.randint(0, 3), rng.randint(1, 3))
                y = [a + mu * c for a, c in zip(y, r)]
        elif kind == 1:  # member plus an orthant step: in the closure
            e = rng.choice(cp.E)
            y = [Fraction(v) + Fraction(rng.randint(0, 3), rng.randint(1, 3)) for v in e]
        elif kind == 2:  # scaled-down minimal point: usually outside
            e = rng.choice(cp.E)
            t = Fraction(rng.randint(0, 5), 6)
            y = [t * v for v in e]
        else:  # random nonnegative point
            y = [Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(k)]
        out.append(y)
    return out


def criterion_11() -> CriterionResult:
    def body():
        rng = random.Random(5)
        insts = [i for i in suite.rational_suite() if len(i.P) <= 3][:20]
        insts += suite.irrational_suite()[:6] + [examples.pure_integer_instance()]
        fails = 0
        kinds = {"conv": 0, "closure_not_conv": 0, "outside": 0}
        for inst in insts:
            cp = hull.build(inst)
            ok, det = hull.check_aff_intersection(cp, _samples(cp, rng, 100))
            fails += not ok
            for d in det:
                if d["conv"]:
                    kinds["conv"] += 1
                elif hull.member_closure(cp, d["y"]).member:
                    kinds["closure_not_conv"] += 1
                else:
                    kinds["outside"] += 1
        return fails == 0, {"instances": len(insts), "failures": fails, "sample_kinds": kinds}
    return _timed(11, "C^P equals closure intersected with its affine hull", None, body)


def criterion_12() -> CriterionResult:
    def body():
        rng = random.Random(12)
        lp_bad = 0
        stats = {exactlp.OPTIMAL: 0, exactlp.INFEASIBLE: 0, exactlp.UNBOUNDED: 0}
        for _ in range(500):
            lp = suite.random_lp(rng)
            out = exactlp.solve_lp(lp)
            stats[out.status] += 1
            lp_bad += not exactlp.verify(lp, out)
        mip_bad = 0
        for _ in range(150):
            mip = suite.random_bounded_mip(rng)
            got = exactlp.solve_mip(mip)
            ref = oracles.brute_mip(mip)
            same = got.status == ref.status and (got.status != exactlp.OPTIMAL or got.value == ref.value)
            if got.status == exactlp.OPTIMAL:
                same = same and exactlp.verify_incumbent(mip, got)
            mip_bad += not same
        return lp_bad == 0 and mip_bad == 0, {"lp_statuses": stats, "lp_failures": lp_bad,
                                              "mips": 150, "mip_mismatches": mip_bad}
    return _timed(12, "exact LP certificates and branch-and-bound vs brute force", None, body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(only: list[int] | None = None) -> list[CriterionResult]:
    return [c() for i, c in enumerate(CRITERIA, 1) if only is None or i in only]
