"""Continuous piecewise-linear periodic functions on R/Z.

Subadditivity is decided on the vertices of the two-dimensional complex cut
out by the lines ``u = x_i``, ``v = x_j`` and ``u + v = x_k`` (mod 1).  On
each cell of that complex ``f(u) + f(v) - f(u + v)`` is affine, so its
minimum over the torus is attained at a vertex, and every vertex lies on two
of the three families:

    (x_i, x_j),  (x_i, frac(x_k - x_i)),  (frac(x_k - x_j), x_j).

Symmetry ``f(x) + f(b - x) = 1`` is affine between consecutive points of
``B U {frac(b - x_i)}`` and is checked there.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from cornerlab.numctx import GroupReal, NumberContext, as_real, compare


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class PwlPeriodic:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(Fraction(x) for x in self.breakpoints)
        vs = tuple(Fraction(v) for v in self.values)
        if not xs or xs[0] != 0:
            raise ValueError("breakpoints must start at 0")
        if any(a >= b for a, b in zip(xs, xs[1:])) or xs[-1] >= 1:
            raise ValueError("breakpoints must be strictly increasing in [0, 1)")
        if len(vs) != len(xs):
            raise ValueError("one value per breakpoint")
        object.__setattr__(self, "breakpoints", xs)
        object.__setattr__(self, "values", vs)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        xs = self.breakpoints + (Fraction(1),)
        vs = self.values + (self.values[0],)
        return tuple((vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]) for i in range(len(self.breakpoints)))

    def max_value(self) -> Fraction:
        return max(self.values)

    def _segment(self, x: GroupReal) -> int:
        # x in [0, 1); last breakpoint <= x
        if x.is_rational():
            return bisect.bisect_right(self.breakpoints, x.rat) - 1
        lo, hi = 0, len(self.breakpoints)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if compare(x, self.breakpoints[mid]) >= 0:
                lo = mid
            else:
                hi = mid
        return lo

    def at(self, x) -> Fraction | GroupReal:
        """Exact value; a GroupReal when ``x`` is irrational."""
        x = as_real(x)
        if x.is_rational():
            u = _frac(x.rat)
            i = bisect.bisect_right(self.breakpoints, u) - 1
            return self.values[i] + self.slopes[i] * (u - self.breakpoints[i])
        u = x.frac()
        i = self._segment(u)
        return (u - self.breakpoints[i]) * self.slopes[i] + self.values[i]

    __call__ = at

    def scaled(self, q) -> "PwlPeriodic":
        return PwlPeriodic(self.breakpoints, tuple(v * Fraction(q) for v in self.values))

    def to_json(self) -> dict:
        return {"breakpoints": [str(x) for x in self.breakpoints], "values": [str(v) for v in self.values]}


def gmic(b) -> PwlPeriodic:
    """``x/b`` on ``[0, b]``, ``(1 - x)/(1 - b)`` on ``[b, 1]``."""
    b = _frac(Fraction(b))
    if b == 0:
        raise ValueError("b must not be an integer")
    return PwlPeriodic((Fraction(0), b), (Fraction(0), Fraction(1)))


def from_points(points: Mapping) -> PwlPeriodic:
    items = sorted((Fraction(k), Fraction(v)) for k, v in points.items())
    return PwlPeriodic(tuple(k for k, _ in items), tuple(v for _, v in items))


@dataclass(frozen=True)
class SublinearOneD:
    """``psi(r) = s_plus * r`` for ``r >= 0`` and ``s_minus * (-r)`` for ``r <= 0``."""

    s_plus: Fraction
    s_minus: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s_plus", Fraction(self.s_plus))
        object.__setattr__(self, "s_minus", Fraction(self.s_minus))

    def __call__(self, r):
        r = as_real(r)
        if r.is_zero():
            return Fraction(0)
        if r > 0:
            out = r * self.s_plus
        else:
            out = -r * self.s_minus
        return out.rat if out.is_rational() else out

    @property
    def lipschitz(self) -> Fraction:
        return max(self.s_plus, self.s_minus)

    def is_sublinear(self) -> bool:
        return self.s_plus + self.s_minus >= 0

    def to_json(self) -> dict:
        return {"s_plus": str(self.s_plus), "s_minus": str(self.s_minus)}


@dataclass(frozen=True)
class AdditiveFunction:
    """Additive on R, zero on Q, ``c[t]`` at each tag ``t`` of ``ctx``."""

    c: tuple[tuple[str, Fraction], ...]
    ctx: NumberContext | None = None

    def __post_init__(self):
        c = self.c.items() if isinstance(self.c, Mapping) else self.c
        c = tuple((s, Fraction(v)) for s, v in c if Fraction(v) != 0)
        if c and self.ctx is None:
            raise ValueError("nonzero additive function needs a context")
        for s, _ in c:
            if s not in self.ctx:
                raise ValueError(f"unknown tag {s!r}")
        object.__setattr__(self, "c", c)

    def coeff(self, symbol: str) -> Fraction:
        return dict(self.c).get(symbol, Fraction(0))

    def __call__(self, x) -> Fraction:
        x = as_real(x)
        return sum((v * x.coeff(s) for s, v in self.c), Fraction(0))


@dataclass(frozen=True)
class ShiftedFunction:
    """``pi = base + shift`` with ``base >= 0``."""

    base: PwlPeriodic
    shift: AdditiveFunction

    def __post_init__(self):
        if min(self.base.values) < 0:
            raise ValueError("base function must be nonnegative")

    def __call__(self, x):
        v = as_real(self.base(x)) + self.shift(x)
        return v.rat if v.is_rational() else v

    def to_json(self) -> dict:
        out = self.base.to_json()
        out["shift"] = {s: str(v) for s, v in self.shift.c}
        return out


def evaluate(f: PwlPeriodic | ShiftedFunction, x) -> Fraction | GroupReal:
    return f(x)


def function_from_json(obj: Mapping) -> PwlPeriodic | ShiftedFunction:
    base = PwlPeriodic(tuple(Fraction(x) for x in obj["breakpoints"]),
                       tuple(Fraction(v) for v in obj["values"]))
    if "shift" not in obj:
        return base
    shift = obj["shift"] or {}
    ctx = NumberContext.from_symbols(shift) if shift else None
    return ShiftedFunction(base, AdditiveFunction(tuple((s, Fraction(v)) for s, v in shift.items()), ctx))


# ---------------------------------------------------------------------------
# checks


def _delta(f: PwlPeriodic, u: Fraction, v: Fraction) -> Fraction:
    return f(u) + f(v) - f(u + v)


def subadditivity_vertices(f: PwlPeriodic) -> list[tuple[Fraction, Fraction]]:
    B = f.breakpoints
    pts = set()
    for u in B:
        for v in B:
            pts.add((u, v))
        for w in B:
            pts.add((u, _frac(w - u)))
            pts.add((_frac(w - u), u))
    return sorted(pts)


def check_subadditive(f: PwlPeriodic) -> tuple[bool, tuple[Fraction, Fraction] | None]:
    """Exact decision; the witness is a most violated vertex."""
    worst, arg = Fraction(0), None
    for u, v in subadditivity_vertices(f):
        d = _delta(f, u, v)
        if d < worst:
            worst, arg = d, (u, v)
    return arg is None, arg


@dataclass(frozen=True)
class MinimalityReport:
    b: Fraction
    nonnegative: bool
    zero_at_origin: bool
    subadditive: bool
    subadditivity_witness: tuple[Fraction, Fraction] | None
    symmetric: bool
    symmetry_witness: Fraction | None

    @property
    def minimal(self) -> bool:
        return self.nonnegative and self.zero_at_origin and self.subadditive and self.symmetric

    def to_json(self) -> dict:
        w = self.subadditivity_witness
        return {
            "b": str(self.b), "minimal": self.minimal, "nonnegative": self.nonnegative,
            "zero_at_origin": self.zero_at_origin, "subadditive": self.subadditive,
            "subadditivity_witness": None if w is None else [str(w[0]), str(w[1])],
            "symmetric": self.symmetric,
            "symmetry_witness": None if self.symmetry_witness is None else str(self.symmetry_witness),
        }


def _reduce_b(b) -> Fraction:
    b = _frac(Fraction(b))
    if b == 0:
        raise ValueError("b must not be an integer")
    return b


def symmetry_points(f: PwlPeriodic, b: Fraction) -> list[Fraction]:
    return sorted(set(f.breakpoints) | {_frac(b - x) for x in f.breakpoints})


def check_symmetric(f: PwlPeriodic, b) -> tuple[bool, Fraction | None]:
    b = _reduce_b(b)
    for x in symmetry_points(f, b):
        if f(x) + f(b - x) != 1:
            return False, x
    return True, None


def check_minimal_pure(f: PwlPeriodic, b) -> MinimalityReport:
    b = _reduce_b(b)
    sub, wit = check_subadditive(f)
    sym, swit = check_symmetric(f, b)
    return MinimalityReport(b, min(f.values) >= 0, f.values[0] == 0, sub, wit, sym, swit)


def slope_lift(f: PwlPeriodic) -> SublinearOneD:
    """One-sided derivatives at 0: the sup of ``f(eps r)/eps`` for subadditive f."""
    s = f.slopes
    return SublinearOneD(s[0], -s[-1])


def check_liftable(f: PwlPeriodic, b) -> tuple[bool, SublinearOneD]:
    """Continuous PWL minimal functions always have finite one-sided slopes
    at 0, hence are liftable.  Raises if ``f`` is not minimal for ``b``."""
    rep = check_minimal_pure(f, b)
    if not rep.minimal:
        raise ValueError(f"liftability needs a minimal function: {rep.to_json()}")
    return True, slope_lift(f)


@dataclass(frozen=True)
class MixedMinimalityReport:
    subadditive: bool  # (a)
    psi_is_slope_lift: bool  # (b)
    lipschitz_ok: bool  # (c)
    lipschitz_constant: Fraction
    normalized: bool  # (d) f >= 0, f(0) = 0, alpha = 1
    symmetric: bool  # (e)

    @property
    def minimal(self) -> bool:
        return all((self.subadditive, self.psi_is_slope_lift, self.lipschitz_ok, self.normalized, self.symmetric))

    def to_json(self) -> dict:
        return {"minimal": self.minimal, "subadditive": self.subadditive,
                "psi_is_slope_lift": self.psi_is_slope_lift, "lipschitz_ok": self.lipschitz_ok,
                "lipschitz_constant": str(self.lipschitz_constant), "normalized": self.normalized,
                "symmetric": self.symmetric}


def check_mixed_minimal(psi: SublinearOneD, f: PwlPeriodic, b, alpha) -> MixedMinimalityReport:
    sub, _ = check_subadditive(f)
    lift = slope_lift(f)
    L = psi.lipschitz
    steepest = max(abs(s) for s in f.slopes)
    sym, _ = check_symmetric(f, b)
    norm = min(f.values) >= 0 and f.values[0] == 0 and Fraction(alpha) == 1
    return MixedMinimalityReport(sub, psi == lift, steepest == L, steepest, norm, sym)


# ---------------------------------------------------------------------------
# additive part recovery


@dataclass(frozen=True)
class ThetaEstimate:
    symbol: str
    exact: Fraction
    scan_min: GroupReal  # min_{k <= K} pi(k a) / k
    scan_max_dual: GroupReal  # max_{k <= K} -pi(-k a) / k
    error_bound: Fraction
    K: int

    def within_bound(self) -> bool:
        return compare(self.scan_min - self.exact, self.error_bound) <= 0 and self.scan_min >= self.exact

    def to_json(self) -> dict:
        return {"symbol": self.symbol, "exact": str(self.exact), "scan_min": self.scan_min.to_json(),
                "scan_max_dual": self.scan_max_dual.to_json(), "error_bound": str(self.error_bound),
                "K": self.K, "within_bound": self.within_bound()}


class SandwichViolation(AssertionError):
    pass


def extract_theta(g: ShiftedFunction, K: int, symbols: Sequence[str] | None = None) -> dict[str, ThetaEstimate]:
    """Scan ``pi(k a)/k`` for ``k <= K`` at each tag ``a``.

    ``pi(ka)/k = pi0(ka)/k + c(a)`` and ``0 <= pi0 <= max pi0``, so the
    running minimum lies in ``[c(a), c(a) + max pi0 / K]`` and the dual
    running maximum of ``-pi(-ka)/k`` stays below ``c(a)``.  The sandwich is
    asserted at every prefix.
    """
    if K <= 0:
        raise ValueError("K must be positive")
    ctx = g.shift.ctx
    if symbols is None:
        symbols = ctx.symbols if ctx is not None else ()
    out = {}
    for sym in symbols:
        a = ctx.tag(sym)
        exact = g.shift.coeff(sym)
        lo = hi = None
        for k in range(1, K + 1):
            up = as_real(g(a * k)) / k
            dn = -as_real(g(a * -k)) / k
            if lo is None or up < lo:
                lo = up
            if hi is None or dn > hi:
                hi = dn
            if not (lo >= exact >= hi):
                raise SandwichViolation(f"scan sandwich fails at k={k} for {sym}")
        out[sym] = ThetaEstimate(sym, exact, lo, hi, g.base.max_value() / K, K)
    return out
