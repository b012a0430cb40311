"""Seeded random instance and function generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from cornerlab import exactlp
from cornerlab.gjfun import PwlPeriodic, check_minimal_pure, gmic
from cornerlab.model import PureInstance, rational_vector
from cornerlab.numctx import GroupReal, GroupVector, NumberContext


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 20240601
    count: int = 50
    max_n: int = 2
    max_P: int = 4
    min_q: int = 2
    max_q: int = 7


def random_rational_instance(rng: random.Random, n: int, k: int, q: int) -> PureInstance:
    """``b`` and ``k`` distinct entries of ``P`` on the grid ``(1/q) Z^n cap [0,1)^n``."""
    def point():
        return tuple(Fraction(rng.randrange(q), q) for _ in range(n))

    b = point()
    while all(v == 0 for v in b):
        b = point()
    P = set()
    while len(P) < k:
        p = point()
        if any(v != 0 for v in p):
            P.add(p)
    return PureInstance(rational_vector(*b), tuple(rational_vector(*p) for p in sorted(P)))


def reachable(inst: PureInstance) -> bool:
    """Is ``b`` in the subgroup of (Q/Z)^n generated by rational ``P``?"""
    def red(v):
        return tuple(x - (x.numerator // x.denominator) for x in v)

    gens = [red(p.rational_part()) for p in inst.P]
    seen = {red([0] * inst.n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = red([a + c for a, c in zip(v, g)])
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return red(inst.b.rational_part()) in seen


def rational_suite(cfg: SuiteConfig = SuiteConfig()) -> list[PureInstance]:
    """Random rational instances with nonempty corner polyhedron."""
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.count:
        n = rng.randint(1, cfg.max_n)
        q = rng.randint(cfg.min_q, cfg.max_q)
        k = rng.randint(1, min(cfg.max_P, q ** n - 1))
        inst = random_rational_instance(rng, n, k, q)
        if reachable(inst):
            out.append(inst)
    return out


def irrational_suite(count: int = 12, seed: int = 7) -> list[PureInstance]:
    """``P`` contains ``b`` (so C^P is nonempty) and exactly one entry with a
    sqrt2 component."""
    ctx = NumberContext.sqrt(2)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randint(2, 5)
        b = Fraction(rng.randint(1, q - 1), q)
        c = Fraction(rng.choice([1, -1, 2, 3]), rng.randint(1, 3))
        irr = GroupVector([GroupReal(Fraction(rng.randrange(q), q), {"sqrt2": c}, ctx)])
        extra = [rational_vector(Fraction(rng.randint(1, q - 1), q)) for _ in range(rng.randint(0, 1))]
        P = [rational_vector(b), irr] + [e for e in extra if e != rational_vector(b)]
        out.append(PureInstance(rational_vector(b), tuple(P)))
    return out


# ---------------------------------------------------------------------------
# functions


def spiked(f: PwlPeriodic, b: Fraction, height=Fraction(3)) -> PwlPeriodic:
    """Raise ``f`` to ``height`` at the midpoint of ``[b, 1]``."""
    x = (1 + b) / 2
    delta = min(b, 1 - b) / 8
    pts = dict(zip(f.breakpoints, f.values))
    for t in (x - delta, x + delta):
        pts.setdefault(t, f(t))
    pts[x] = Fraction(height)
    keys = sorted(pts)
    return PwlPeriodic(tuple(keys), tuple(pts[k] for k in keys))


def random_symmetric(rng: random.Random, q: int, bnum: int) -> PwlPeriodic:
    """PWL on the grid ``1/q`` with ``f(0) = 0`` and ``f(x) + f(b - x) = 1``."""
    vals: dict[int, Fraction] = {0: Fraction(0), bnum: Fraction(1)}
    for i in range(q):
        if i in vals:
            continue
        j = (bnum - i) % q
        if j == i:
            vals[i] = Fraction(1, 2)
        else:
            v = Fraction(rng.randint(0, 4), 4)
            vals[i], vals[j] = v, 1 - v
    return PwlPeriodic(tuple(Fraction(i, q) for i in range(q)), tuple(vals[i] for i in range(q)))


def minimal_function_suite(seed: int = 3, tries: int = 400) -> list[tuple[PwlPeriodic, Fraction]]:
    """GMICs with small denominators plus random grid functions that pass the
    minimality check."""
    out = []
    for q in range(2, 9):
        for a in range(1, q):
            b = Fraction(a, q)
            if b.denominator == q:
                out.append((gmic(b), b))
    rng = random.Random(seed)
    for _ in range(tries):
        q = rng.randint(3, 10)
        bnum = rng.randint(1, q - 1)
        f = random_symmetric(rng, q, bnum)
        b = Fraction(bnum, q)
        if check_minimal_pure(f, b).minimal:
            out.append((f, b))
    return out


def random_pwl(rng: random.Random, max_pieces: int = 5, den: int = 12) -> PwlPeriodic:
    k = rng.randint(1, max_pieces)
    xs = sorted({Fraction(0)} | {Fraction(rng.randint(1, den - 1), den) for _ in range(k - 1)})
    vs = [Fraction(0)] + [Fraction(rng.randint(0, 8), 4) for _ in xs[1:]]
    return PwlPeriodic(tuple(xs), tuple(vs))


# ---------------------------------------------------------------------------
# LPs and MIPs


def random_lp(rng: random.Random, max_vars: int = 4, max_rows: int = 4) -> exactlp.LinearProgram:
    nv = rng.randint(1, max_vars)
    m = rng.randint(1, max_rows)

    def r():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 3))

    c = [r() for _ in range(nv)]
    A = [[r() for _ in range(nv)] for _ in range(m)]
    senses = [rng.choice(["<=", ">=", "="]) for _ in range(m)]
    rhs = [r() for _ in range(m)]
    lower = [rng.choice([Fraction(0), Fraction(0), None, Fraction(-2)]) for _ in range(nv)]
    upper = [rng.choice([None, None, Fraction(3)]) for _ in range(nv)]
    return exactlp.LinearProgram(c, A, senses, rhs, lower, upper)


def random_bounded_mip(rng: random.Random) -> exactlp.MipProblem:
    """At most three integer variables in ``[0, 10]`` and at most one
    continuous variable in ``[0, 5]``."""
    ni = rng.randint(1, 3)
    nc = rng.randint(0, 1)
    nv = ni + nc
    m = rng.randint(1, 3)

    def r():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))

    lp = exactlp.LinearProgram(
        [r() for _ in range(nv)],
        [[r() for _ in range(nv)] for _ in range(m)],
        [rng.choice(["<=", ">=", "="]) for _ in range(m)],
        [Fraction(rng.randint(-10, 20), rng.randint(1, 3)) for _ in range(m)],
        [Fraction(0)] * nv,
        [Fraction(10)] * ni + [Fraction(5)] * nc,
    )
    return exactlp.MipProblem(lp, [True] * ni + [False] * nc)
