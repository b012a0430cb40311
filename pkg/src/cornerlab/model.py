"""Finite canonical faces of the group relaxations and their solutions.

Solutions are indexed by position in ``P`` (and ``R``).  Integer parts are
plain ints; continuous parts are GroupReals so that the irrational slack of
the non-closed face example can be represented exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from cornerlab.numctx import (
    EMPTY,
    GroupReal,
    GroupVector,
    NumberContext,
    as_real,
    enclose,
    shared_context,
    vector_from_json,
)


class InstanceError(ValueError):
    """Malformed or degenerate instance data (for example ``b`` integral)."""


def _check_vectors(n: int, vs: Sequence[GroupVector], name: str):
    for v in vs:
        if len(v) != n:
            raise InstanceError(f"{name} entry {v!r} has length {len(v)}, expected {n}")
    if len(set(vs)) != len(vs):
        raise InstanceError(f"{name} entries must be distinct")


@dataclass(frozen=True)
class PureInstance:
    b: GroupVector
    P: tuple[GroupVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(self.P))
        if len(self.b) == 0:
            raise InstanceError("n must be positive")
        if self.b.is_integer():
            raise InstanceError("b must not be an integer vector")
        _check_vectors(self.n, self.P, "P")
        self.ctx  # raises on mismatch

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def ctx(self) -> NumberContext:
        return shared_context([self.b, *self.P, *getattr(self, "R", ())])

    def is_rational(self) -> bool:
        return self.b.is_rational() and all(p.is_rational() for p in self.P)

    def to_json(self) -> dict:
        out = {"context": self.ctx.to_json(), "n": self.n, "b": self.b.to_json(),
               "P": [p.to_json() for p in self.P]}
        return out


@dataclass(frozen=True)
class MixedInstance(PureInstance):
    R: tuple[GroupVector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(self.R))
        super().__post_init__()
        _check_vectors(self.n, self.R, "R")

    @property
    def pure(self) -> PureInstance:
        return PureInstance(self.b, self.P)

    def to_json(self) -> dict:
        out = super().to_json()
        out["R"] = [r.to_json() for r in self.R]
        return out


def instance_from_json(obj: Mapping) -> PureInstance:
    ctx = NumberContext.from_json(obj.get("context"))
    try:
        b = vector_from_json(obj["b"], ctx)
        P = [vector_from_json(p, ctx) for p in obj.get("P", [])]
        R = [vector_from_json(r, ctx) for r in obj.get("R", [])] if "R" in obj else None
    except KeyError as e:
        raise InstanceError(f"missing field {e}") from None
    if "n" in obj and int(obj["n"]) != len(b):
        raise InstanceError(f"n={obj['n']} but b has length {len(b)}")
    if R is None:
        return PureInstance(b, tuple(P))
    return MixedInstance(b, tuple(P), tuple(R))


def rational_vector(*values) -> GroupVector:
    return GroupVector.rational(values)


@dataclass(frozen=True)
class PureSolution:
    y: tuple[int, ...]

    def __post_init__(self):
        y = tuple(int(v) for v in self.y)
        if any(v < 0 for v in y):
            raise ValueError("y must be nonnegative")
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class MixedSolution:
    s: tuple[GroupReal, ...]
    y: tuple[int, ...]

    def __post_init__(self):
        s = tuple(as_real(v) for v in self.s)
        y = tuple(int(v) for v in self.y)
        if any(v < 0 for v in s) or any(v < 0 for v in y):
            raise ValueError("s and y must be nonnegative")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class TupleRestriction:
    """Coefficients ``h`` on R, ``d`` on P and right-hand side ``alpha``."""

    d: tuple[Fraction, ...]
    alpha: Fraction
    h: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(Fraction(v) for v in self.d))
        object.__setattr__(self, "h", tuple(Fraction(v) for v in self.h))
        object.__setattr__(self, "alpha", Fraction(self.alpha))


def _parts(inst, sol):
    if isinstance(sol, PureSolution):
        return (), sol.y
    return sol.s, sol.y


def combination(inst: PureInstance, sol) -> GroupVector:
    """``sum r s(r) + sum p y(p)``."""
    s, y = _parts(inst, sol)
    R = getattr(inst, "R", ())
    if len(y) != len(inst.P) or len(s) != len(R):
        raise ValueError("solution is not indexed by the instance")
    total = GroupVector.rational([0] * inst.n)
    for r, sv in zip(R, s):
        if not sv.is_zero():
            total = total + GroupVector(e * sv for e in r)
    for p, yv in zip(inst.P, y):
        if yv:
            total = total + p.scale(yv)
    return total


def check_feasible(inst: PureInstance, sol) -> bool:
    return (combination(inst, sol) - inst.b).is_integer()


def _norm_interval(v: GroupVector, width: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of the Euclidean norm of ``v``, exact when possible."""
    if v.is_rational():
        sq = sum((e.rat * e.rat for e in v), Fraction(0))
        rn, rd = math.isqrt(sq.numerator), math.isqrt(sq.denominator)
        if rn * rn == sq.numerator and rd * rd == sq.denominator:
            root = Fraction(rn, rd)
            return root, root
    # refine the entry enclosures until the sqrt bracket is narrow enough
    w = Fraction(1, 4)
    while True:
        lo2 = hi2 = Fraction(0)
        for e in v:
            a, b = enclose(e, w)
            if a <= 0 <= b:
                lo2 += 0
                hi2 += max(a * a, b * b)
            else:
                lo2 += min(a * a, b * b)
                hi2 += max(a * a, b * b)
        lo, hi = _sqrt_bracket(lo2, w, below=True), _sqrt_bracket(hi2, w, below=False)
        if hi - lo <= width:
            return lo, hi
        w /= 4


def _sqrt_bracket(x: Fraction, step: Fraction, below: bool) -> Fraction:
    # rational r with r <= sqrt(x) (below) or r >= sqrt(x), on a grid of size step
    q = step.denominator
    a = math.isqrt(int(x * q * q))
    if below:
        return Fraction(a, q)
    r = Fraction(a, q)
    while r * r < x:
        r += Fraction(1, q)
    return r


def star_norm(inst: PureInstance, sol, width=Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
    """Interval containing ``|s(0)| + sum ||r|| |s(r)| + |y(0)| + sum ||p|| |y(p)|``."""
    width = Fraction(width)
    s, y = _parts(inst, sol)
    R = getattr(inst, "R", ())
    terms = list(zip(R, s)) + [(p, as_real(v)) for p, v in zip(inst.P, y)]
    terms = [(v, c) for v, c in terms if not c.is_zero()]
    share = width / max(1, len(terms))
    while True:
        lo = hi = Fraction(0)
        for v, c in terms:
            clo, chi = enclose(c, share)
            clo, chi = (Fraction(0), max(-clo, chi)) if clo <= 0 <= chi else sorted((abs(clo), abs(chi)))
            nlo, nhi = (Fraction(1), Fraction(1)) if v.is_zero() else _norm_interval(v, share)
            lo += nlo * clo
            hi += nhi * chi
        if hi - lo <= width:
            return lo, hi
        share /= 4


def tuple_violation(inst: PureInstance, tup: TupleRestriction, sol) -> GroupReal:
    """``sum h s + sum d y - alpha`` (exact)."""
    s, y = _parts(inst, sol)
    if len(tup.d) != len(y) or (s and len(tup.h) != len(s)):
        raise ValueError("restriction is not indexed by the instance")
    total = as_real(-tup.alpha)
    for h, sv in zip(tup.h, s):
        total = total + sv * h
    for d, yv in zip(tup.d, y):
        total = total + d * yv
    return total


def solution_from_json(inst: PureInstance, obj: Mapping):
    """``{"y": {"0": 1}, "s": {"1": "1/5"}}``: index into P / R -> value."""
    ctx = inst.ctx if inst.ctx is not EMPTY else None
    y = [0] * len(inst.P)
    for k, v in (obj.get("y") or {}).items():
        y[int(k)] = int(v)
    if isinstance(inst, MixedInstance):
        from cornerlab.numctx import value_from_json

        s = [GroupReal(0)] * len(inst.R)
        for k, v in (obj.get("s") or {}).items():
            s[int(k)] = value_from_json(v, ctx)
        return MixedSolution(tuple(s), tuple(y))
    return PureSolution(tuple(y))
