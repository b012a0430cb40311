"""Exact reals in a finitely generated Q-vector space.

A :class:`NumberContext` declares a finite list of tags (named irrational
reals).  The set ``{1} U tags`` is *assumed* to be linearly independent over
Q; this is an axiom of the context and is never verified.  Multiplicative
relations between tags (for instance sqrt2, sqrt3 and sqrt6 together) are
the caller's responsibility to avoid.

A :class:`GroupReal` is ``rat + sum(c_t * t)`` with rational ``rat`` and
nonzero rational ``c_t``.  Because of the independence axiom, equality is
coefficient-wise equality, and order is decided by refining interval
enclosures of the difference until zero is excluded.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from cornerlab import linalg

Interval = tuple[Fraction, Fraction]

DEFAULT_MAX_HALVINGS = 64


class ContextMismatch(ValueError):
    pass


class ComparisonCapExceeded(ArithmeticError):
    """Enclosure refinement hit its cap without separating the values."""


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


@functools.lru_cache(maxsize=4096)
def _sqrt_dyadic(m: int, bits: int) -> Interval:
    # floor(sqrt(m) * 2**bits) is exact with isqrt; dyadic grids nest.
    scale = 1 << bits
    a = math.isqrt(m * scale * scale)
    return Fraction(a, scale), Fraction(a + 1, scale)


def _bits_for(width: Fraction) -> int:
    if width <= 0:
        raise ValueError("width must be positive")
    # least bits with 2**-bits <= width
    bits = max(0, (width.denominator // width.numerator).bit_length() - 1)
    while bits > 0 and (1 << (bits - 1)) * width.numerator >= width.denominator:
        bits -= 1
    while (1 << bits) * width.numerator < width.denominator:
        bits += 1
    return bits


@dataclass(frozen=True)
class Tag:
    """A named real number with a rational enclosure oracle.

    ``kind="sqrt"`` tags are square roots of square-free integers and ship
    with a dyadic enclosure.  Other kinds must pass ``oracle``, a callable
    ``width -> (lo, hi)`` returning an interval of length at most ``width``
    that contains the value.
    """

    symbol: str
    kind: str = "sqrt"
    of: int | None = None
    oracle: Callable[[Fraction], Interval] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.symbol.isidentifier():
            raise ValueError(f"tag symbol must be an identifier: {self.symbol!r}")
        if self.kind == "sqrt":
            if self.of is None or not _squarefree(int(self.of)):
                raise ValueError(f"sqrt tag needs a square-free integer >= 2, got {self.of!r}")
        elif self.oracle is None:
            raise ValueError(f"tag {self.symbol!r} of kind {self.kind!r} needs an oracle")

    def enclose(self, width: Fraction) -> Interval:
        width = Fraction(width)
        if self.kind == "sqrt":
            return _sqrt_dyadic(int(self.of), _bits_for(width))
        lo, hi = self.oracle(width)
        lo, hi = Fraction(lo), Fraction(hi)
        if hi - lo > width or lo > hi:
            raise ValueError(f"oracle for {self.symbol!r} returned a bad interval")
        return lo, hi

    def to_json(self) -> dict:
        if self.kind != "sqrt":
            raise ValueError("only sqrt tags are serializable")
        return {"symbol": self.symbol, "kind": "sqrt", "of": int(self.of)}


class NumberContext:
    """An ordered collection of Q-independent tags."""

    def __init__(self, tags: Iterable[Tag] = ()):
        self.tags = tuple(tags)
        symbols = [t.symbol for t in self.tags]
        if len(set(symbols)) != len(symbols):
            raise ValueError("tag symbols must be distinct")
        self._by_symbol = {t.symbol: t for t in self.tags}

    @classmethod
    def sqrt(cls, *radicands: int) -> "NumberContext":
        return cls(Tag(f"sqrt{m}", "sqrt", m) for m in radicands)

    @classmethod
    def from_symbols(cls, symbols: Iterable[str]) -> "NumberContext":
        """Context from names of the form ``sqrtN``."""
        tags = []
        for s in symbols:
            if not (s.startswith("sqrt") and s[4:].isdigit()):
                raise ValueError(f"cannot infer a tag from symbol {s!r}; expected sqrtN")
            tags.append(Tag(s, "sqrt", int(s[4:])))
        return cls(tags)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(t.symbol for t in self.tags)

    def __getitem__(self, symbol: str) -> Tag:
        return self._by_symbol[symbol]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._by_symbol

    def __eq__(self, other):
        return isinstance(other, NumberContext) and self.tags == other.tags

    def __hash__(self):
        return hash(self.tags)

    def __repr__(self):
        return f"NumberContext({', '.join(self.symbols)})"

    def real(self, rat=0, **coeffs) -> "GroupReal":
        return GroupReal(rat, coeffs, self)

    def tag(self, symbol: str) -> "GroupReal":
        return GroupReal(0, {symbol: 1}, self)

    def to_json(self) -> dict:
        return {"tags": [t.to_json() for t in self.tags]}

    @classmethod
    def from_json(cls, obj: Mapping | None) -> "NumberContext":
        if not obj:
            return cls()
        tags = []
        for t in obj.get("tags", []):
            if t.get("kind", "sqrt") != "sqrt":
                raise ValueError(f"unsupported tag kind {t.get('kind')!r}")
            tags.append(Tag(t["symbol"], "sqrt", int(t["of"])))
        return cls(tags)


EMPTY = NumberContext()


def _merge_ctx(a: NumberContext | None, b: NumberContext | None) -> NumberContext | None:
    if a is None or a is b:
        return b if a is None else a
    if b is None:
        return a
    if a != b:
        raise ContextMismatch(f"{a!r} vs {b!r}")
    return a


class GroupReal:
    """``rat + sum(coeff[t] * t)``; immutable, canonical (no zero coefficients)."""

    __slots__ = ("rat", "coeffs", "ctx")

    def __init__(self, rat=0, coeffs: Mapping[str, object] | None = None, ctx: NumberContext | None = None):
        rat = Fraction(rat)
        items = []
        for sym, c in (coeffs or {}).items():
            c = Fraction(c)
            if c != 0:
                items.append((sym, c))
        if items:
            if ctx is None:
                raise ContextMismatch("irrational GroupReal needs a context")
            for sym, _ in items:
                if sym not in ctx:
                    raise ContextMismatch(f"unknown tag {sym!r} for {ctx!r}")
            order = {s: i for i, s in enumerate(ctx.symbols)}
            items.sort(key=lambda kv: order[kv[0]])
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "ctx", ctx if items else None)

    def __setattr__(self, name, value):
        raise AttributeError("GroupReal is immutable")

    @staticmethod
    def _wrap(x) -> "GroupReal":
        if isinstance(x, GroupReal):
            return x
        if isinstance(x, (int, Fraction)):
            return GroupReal(x)
        return NotImplemented

    # -- structure ---------------------------------------------------------
    def coeff(self, symbol: str) -> Fraction:
        for s, c in self.coeffs:
            if s == symbol:
                return c
        return Fraction(0)

    def is_rational(self) -> bool:
        return not self.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs and self.rat == 0

    def is_integer(self) -> bool:
        return not self.coeffs and self.rat.denominator == 1

    def tag_vector(self, ctx: NumberContext) -> list[Fraction]:
        return [self.coeff(s) for s in ctx.symbols]

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        ctx = _merge_ctx(self.ctx, other.ctx)
        acc = dict(self.coeffs)
        for s, c in other.coeffs:
            acc[s] = acc.get(s, Fraction(0)) + c
        return GroupReal(self.rat + other.rat, acc, ctx)

    __radd__ = __add__

    def __neg__(self):
        return GroupReal(-self.rat, {s: -c for s, c in self.coeffs}, self.ctx)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, q) -> "GroupReal":
        q = Fraction(q)
        return GroupReal(self.rat * q, {s: c * q for s, c in self.coeffs}, self.ctx)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, GroupReal):
            if other.is_rational():
                return self.scale(other.rat)
            if self.is_rational():
                return other.scale(self.rat)
            raise TypeError("products of two irrational GroupReals are not supported")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GroupReal):
            if not other.is_rational():
                raise TypeError("division by an irrational GroupReal is not supported")
            other = other.rat
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    # -- equality and order -------------------------------------------------
    def __eq__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return False
        return self.rat == other.rat and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.rat, self.coeffs))

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def floor(self) -> int:
        if not self.coeffs:
            return math.floor(self.rat)
        # irrational by the independence axiom, so some enclosure avoids integers
        w = Fraction(1, 2)
        for _ in range(DEFAULT_MAX_HALVINGS):
            lo, hi = enclose(self, w)
            if math.floor(lo) == math.floor(hi) and hi != math.floor(hi):
                return math.floor(lo)
            w /= 2
        raise ComparisonCapExceeded(f"cannot locate floor of {self}")

    def frac(self) -> "GroupReal":
        return self - self.floor()

    def __repr__(self):
        return f"GroupReal({self})"

    def __str__(self):
        parts = [str(self.rat)] if self.rat != 0 or not self.coeffs else []
        for s, c in self.coeffs:
            parts.append(f"{c}*{s}")
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> str | dict:
        """``"p/q"`` when rational, else ``{"rat": "p/q", "tags": {...}}``."""
        if not self.coeffs:
            return str(self.rat)
        return {"rat": str(self.rat), "tags": {s: str(c) for s, c in self.coeffs}}


def as_real(x, ctx: NumberContext | None = None) -> GroupReal:
    if isinstance(x, GroupReal):
        return x
    return GroupReal(Fraction(x), None, ctx)


def value_from_json(obj, ctx: NumberContext | None) -> GroupReal:
    """Parse ``{"rat": "p/q", "tags": {...}}`` or a bare rational."""
    if isinstance(obj, (int, str)):
        return GroupReal(Fraction(obj))
    if isinstance(obj, float):
        raise ValueError("floats are not accepted; use 'p/q' strings")
    if isinstance(obj, Mapping):
        tags = obj.get("tags") or {}
        if tags and ctx is None:
            raise ContextMismatch("tagged value without a declared context")
        return GroupReal(Fraction(obj.get("rat", 0)), {k: Fraction(v) for k, v in tags.items()}, ctx)
    raise ValueError(f"cannot parse value {obj!r}")


def add(x: GroupReal, y: GroupReal) -> GroupReal:
    return x + y


def is_integer(x: GroupReal) -> bool:
    return x.is_integer()


def enclose(x: GroupReal, width) -> Interval:
    """Rational interval of length <= width containing ``x``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if not x.coeffs:
        return x.rat, x.rat
    lo = hi = x.rat
    share = width / len(x.coeffs)
    for s, c in x.coeffs:
        tlo, thi = x.ctx[s].enclose(share / abs(c))
        if c > 0:
            lo, hi = lo + c * tlo, hi + c * thi
        else:
            lo, hi = lo + c * thi, hi + c * tlo
    return lo, hi


def compare(x, y, max_halvings: int = DEFAULT_MAX_HALVINGS) -> int:
    """-1, 0 or 1.  Equality is decided on canonical forms."""
    d = as_real(x) - as_real(y)
    if not d.coeffs:
        return (d.rat > 0) - (d.rat < 0)
    w = Fraction(1)
    for _ in range(max_halvings + 1):
        lo, hi = enclose(d, w)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        w /= 2
    raise ComparisonCapExceeded(f"could not separate {d} from 0 after {max_halvings} halvings")


class GroupVector:
    """A fixed-length tuple of GroupReals sharing one context."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        ents = tuple(as_real(e) for e in entries)
        ctx = None
        for e in ents:
            ctx = _merge_ctx(ctx, e.ctx)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("GroupVector is immutable")

    @classmethod
    def rational(cls, values: Iterable) -> "GroupVector":
        return cls(GroupReal(Fraction(v)) for v in values)

    @property
    def ctx(self) -> NumberContext | None:
        for e in self.entries:
            if e.ctx is not None:
                return e.ctx
        return None

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, GroupVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "GroupVector") -> "GroupVector":
        if len(self) != len(other):
            raise ValueError("dimension mismatch")
        return GroupVector(a + b for a, b in zip(self, other))

    def __sub__(self, other: "GroupVector") -> "GroupVector":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, q) -> "GroupVector":
        return GroupVector(e * q for e in self.entries)

    __mul__ = scale
    __rmul__ = scale

    def is_integer(self) -> bool:
        return all(e.is_integer() for e in self.entries)

    def is_rational(self) -> bool:
        return all(e.is_rational() for e in self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def rational_part(self) -> list[Fraction]:
        return [e.rat for e in self.entries]

    def tag_vector(self, ctx: NumberContext) -> list[Fraction]:
        """Flattened tag coefficients, coordinate-major."""
        out: list[Fraction] = []
        for e in self.entries:
            out.extend(e.tag_vector(ctx))
        return out

    def __repr__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def vector_from_json(obj, ctx: NumberContext | None) -> GroupVector:
    if not isinstance(obj, (list, tuple)):
        obj = [obj]
    return GroupVector(value_from_json(v, ctx) for v in obj)


def shared_context(vectors: Iterable[GroupVector]) -> NumberContext:
    ctx = None
    for v in vectors:
        ctx = _merge_ctx(ctx, v.ctx)
    return ctx if ctx is not None else EMPTY


def tag_matrix(vs: Sequence[GroupVector], ctx: NumberContext | None = None) -> linalg.Matrix:
    """Rows indexed by (coordinate, tag), columns by the vectors."""
    if ctx is None:
        ctx = shared_context(vs)
    cols = [v.tag_vector(ctx) for v in vs]
    if not cols:
        return []
    return linalg.transpose(cols) if cols[0] else []


def qlin_kernel(vs: Sequence[GroupVector]) -> linalg.Matrix:
    """Rational basis of ``{lam : sum(lam_i * vs_i)`` has zero tag part``}``."""
    if not vs:
        return []
    rows = [r for r in tag_matrix(vs) if any(r)]
    return linalg.nullspace(rows, len(vs))
