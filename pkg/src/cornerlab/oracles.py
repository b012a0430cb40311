"""Brute-force reference implementations used to cross-check the solvers."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

from cornerlab import exactlp
from cornerlab.gjfun import PwlPeriodic
from cornerlab.model import PureInstance, PureSolution, check_feasible
from cornerlab.numctx import GroupVector


def vectors_up_to(k: int, total: int) -> Iterator[tuple[int, ...]]:
    """All ``y in Z^k_+`` with ``sum(y) <= total``."""
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in vectors_up_to(k - 1, total - first):
            yield (first,) + rest


def minimal_elements(vs) -> list[tuple[int, ...]]:
    vs = sorted(set(vs), key=lambda v: (sum(v), v))
    out: list[tuple[int, ...]] = []
    for v in vs:
        if not any(all(a <= b for a, b in zip(m, v)) for m in out):
            out.append(v)
    return sorted(out)


def brute_minimal_points(inst: PureInstance, total: int) -> list[tuple[int, ...]]:
    feas = [y for y in vectors_up_to(len(inst.P), total) if check_feasible(inst, PureSolution(y))]
    return minimal_elements(feas)


def is_ray(inst: PureInstance, y) -> bool:
    acc = GroupVector.rational([0] * inst.n)
    for p, v in zip(inst.P, y):
        if v:
            acc = acc + p.scale(v)
    return acc.is_integer()


def brute_minimal_rays(inst: PureInstance, total: int) -> list[tuple[int, ...]]:
    rs = [y for y in vectors_up_to(len(inst.P), total) if any(y) and is_ray(inst, y)]
    return minimal_elements(rs)


def grid_subadditive(f: PwlPeriodic, N: int) -> bool:
    pts = [Fraction(i, N) for i in range(N)]
    vals = {x: f(x) for x in pts}
    return all(vals[u] + vals[v] >= vals[(u + v) % 1] for u in pts for v in pts)


def grid_step(f: PwlPeriodic) -> int:
    q = 1
    for x in f.breakpoints:
        q = q * x.denominator // math.gcd(q, x.denominator)
    return 4 * q


def brute_mip(mip: exactlp.MipProblem) -> exactlp.SolveOutcome:
    """Enumerate every integer assignment inside the box (all integer
    variables must be bounded) and solve the remaining LP."""
    lp = mip.lp
    ints = [j for j, f in enumerate(mip.integer) if f]
    ranges = []
    for j in ints:
        lo, hi = lp.lower[j], lp.upper[j]
        if lo is None or hi is None:
            raise ValueError("brute force needs bounded integer variables")
        ranges.append(range(math.ceil(lo), math.floor(hi) + 1))
    best = None
    unbounded = False
    conts = [j for j in range(lp.nvars) if j not in ints]
    for combo in itertools.product(*ranges):
        if len(conts) <= 1:
            cand = _fix_and_solve_1d(lp, ints, combo, conts)
            if cand == "unbounded":
                unbounded = True
            elif cand is not None and (best is None or cand.value < best.value):
                best = cand
            continue
        lower, upper = list(lp.lower), list(lp.upper)
        for j, v in zip(ints, combo):
            lower[j] = upper[j] = Fraction(v)
        out = exactlp.solve_lp(lp.with_bounds(lower, upper))
        if out.status == exactlp.UNBOUNDED:
            unbounded = True
        elif out.status == exactlp.OPTIMAL and (best is None or out.value < best.value):
            best = out
    if unbounded:
        return exactlp.SolveOutcome(exactlp.UNBOUNDED)
    if best is None:
        return exactlp.SolveOutcome(exactlp.INFEASIBLE)
    return exactlp.SolveOutcome(exactlp.OPTIMAL, best.value, best.x)


def _fix_and_solve_1d(lp: exactlp.LinearProgram, ints, combo, conts):
    """Fix the integer variables; at most one continuous variable remains and
    its feasible set is an interval computed row by row."""
    x = [Fraction(0)] * lp.nvars
    for j, v in zip(ints, combo):
        x[j] = Fraction(v)
    if not conts:
        if not exactlp.is_feasible(lp, x):
            return None
        return exactlp.SolveOutcome(exactlp.OPTIMAL, sum((c * v for c, v in zip(lp.c, x)), Fraction(0)), x)
    j = conts[0]
    lo, hi = lp.lower[j], lp.upper[j]
    for row, sense, rhs in zip(lp.A, lp.senses, lp.rhs):
        a = row[j]
        rest = rhs - sum((row[i] * x[i] for i in ints), Fraction(0))
        if a == 0:
            ok = {"<=": 0 <= rest, ">=": 0 >= rest, "=": rest == 0}[sense]
            if not ok:
                return None
            continue
        t = rest / a
        # a * x_j (sense) rest
        if sense == "=":
            lo = t if lo is None else max(lo, t)
            hi = t if hi is None else min(hi, t)
        elif (sense == "<=") == (a > 0):
            hi = t if hi is None else min(hi, t)
        else:
            lo = t if lo is None else max(lo, t)
    if lo is not None and hi is not None and lo > hi:
        return None
    c = lp.c[j]
    if c > 0:
        if lo is None:
            return "unbounded"
        x[j] = lo
    elif c < 0:
        if hi is None:
            return "unbounded"
        x[j] = hi
    else:
        x[j] = lo if lo is not None else (hi if hi is not None else Fraction(0))
    return exactlp.SolveOutcome(exactlp.OPTIMAL, sum((cc * v for cc, v in zip(lp.c, x)), Fraction(0)), x)
