"""Exact rational LP (two-phase primal simplex, Bland's rule) and a small
depth-first branch-and-bound for mixed-integer programs.

Problems are minimisations.  Every outcome carries a certificate that can be
re-checked against the *original* problem with :func:`verify`:

* optimal    -> row multipliers ``y``; the Lagrangian bound
                ``b.y + min_{l<=x<=u} (c - A^T y).x`` equals ``c.x``;
* infeasible -> Farkas multipliers ``y`` with ``max_{l<=x<=u} (A^T y).x < b.y``;
* unbounded  -> a feasible ``x`` and an improving recession direction.

Sign convention for row multipliers (minimisation): ``>=`` rows take
``y >= 0``, ``<=`` rows ``y <= 0``, ``=`` rows are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from cornerlab import linalg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
CAP_EXCEEDED = "cap-exceeded"

DEFAULT_NODE_CAP = 10**6

_F0 = Fraction(0)


@dataclass
class LinearProgram:
    c: list[Fraction]
    A: list[list[Fraction]]
    senses: list[str]
    rhs: list[Fraction]
    lower: list[Fraction | None] | None = None
    upper: list[Fraction | None] | None = None

    def __post_init__(self):
        nv = len(self.c)
        self.c = [Fraction(v) for v in self.c]
        self.A = [[Fraction(v) for v in row] for row in self.A]
        self.rhs = [Fraction(v) for v in self.rhs]
        if self.lower is None:
            self.lower = [_F0] * nv
        if self.upper is None:
            self.upper = [None] * nv
        self.lower = [None if v is None else Fraction(v) for v in self.lower]
        self.upper = [None if v is None else Fraction(v) for v in self.upper]
        if any(len(row) != nv for row in self.A):
            raise ValueError("constraint row length does not match objective")
        if not (len(self.A) == len(self.senses) == len(self.rhs)):
            raise ValueError("rows, senses and rhs must have equal length")
        if len(self.lower) != nv or len(self.upper) != nv:
            raise ValueError("bounds must cover every variable")
        for s in self.senses:
            if s not in ("<=", ">=", "="):
                raise ValueError(f"bad sense {s!r}")

    @property
    def nvars(self) -> int:
        return len(self.c)

    def with_bounds(self, lower, upper) -> "LinearProgram":
        return LinearProgram(self.c, self.A, self.senses, self.rhs, list(lower), list(upper))


@dataclass
class MipProblem:
    lp: LinearProgram
    integer: list[bool]


@dataclass
class SolveOutcome:
    status: str
    value: Fraction | None = None
    x: list[Fraction] | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


# ---------------------------------------------------------------------------
# standard form


class _StandardForm:
    """``min c'x' s.t. A'x' = b' (b' >= 0), x' >= 0`` plus a map back."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        nv = lp.nvars
        self.offset = [_F0] * nv
        cols: list[tuple[int, int]] = []  # (original var, +/-1)
        upper_rows: list[tuple[int, Fraction]] = []  # (internal col, bound)
        for j in range(nv):
            lo, up = lp.lower[j], lp.upper[j]
            if lo is not None:
                self.offset[j] = lo
                cols.append((j, 1))
                if up is not None:
                    upper_rows.append((len(cols) - 1, up - lo))
            elif up is not None:
                self.offset[j] = up
                cols.append((j, -1))
            else:
                cols.append((j, 1))
                cols.append((j, -1))
        self.cols = cols
        nstruct = len(cols)
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        slack_cols = []
        for i, row in enumerate(lp.A):
            r = [row[j] * sgn for j, sgn in cols]
            rows.append(r)
            rhs.append(lp.rhs[i] - linalg.dot(row, self.offset))
            slack_cols.append({"<=": 1, ">=": -1, "=": 0}[lp.senses[i]])
        for col, bound in upper_rows:
            r = [_F0] * nstruct
            r[col] = Fraction(1)
            rows.append(r)
            rhs.append(bound)
            slack_cols.append(1)
        nslack = sum(1 for s in slack_cols if s)
        self.n = nstruct + nslack
        k = nstruct
        for i, s in enumerate(slack_cols):
            rows[i] = rows[i] + [_F0] * nslack
            if s:
                rows[i][k] = Fraction(s)
                k += 1
        self.flip = [1] * len(rows)
        for i in range(len(rows)):
            if rhs[i] < 0:
                rows[i] = [-v for v in rows[i]]
                rhs[i] = -rhs[i]
                self.flip[i] = -1
        self.A = rows
        self.b = rhs
        self.m = len(rows)
        self.m_orig = len(lp.A)
        self.c = [lp.c[j] * sgn for j, sgn in cols] + [_F0] * nslack
        self.const = linalg.dot(lp.c, self.offset)

    def to_original(self, xs: Sequence[Fraction], direction: bool = False) -> list[Fraction]:
        x = [_F0] * self.lp.nvars if direction else list(self.offset)
        for (j, sgn), v in zip(self.cols, xs):
            x[j] += sgn * v
        return x

    def duals_to_original(self, y_int: Sequence[Fraction]) -> list[Fraction]:
        return [self.flip[i] * y_int[i] for i in range(self.m_orig)]


class _Tableau:
    def __init__(self, sf: _StandardForm):
        self.sf = sf
        m, n = sf.m, sf.n
        self.ncols = n + m  # structural + artificial
        self.T = [sf.A[i] + [Fraction(int(i == k)) for k in range(m)] + [sf.b[i]] for i in range(m)]
        self.basis = [n + i for i in range(m)]
        self.allowed = [True] * self.ncols

    def pivot(self, r: int, c: int):
        T = self.T
        pv = T[r][c]
        T[r] = [v / pv for v in T[r]]
        prow = T[r]
        for i in range(len(T)):
            if i != r:
                f = T[i][c]
                if f:
                    T[i] = [a - f * b for a, b in zip(T[i], prow)]
        self.basis[r] = c

    def duals(self, cost: Sequence[Fraction]) -> list[Fraction]:
        n, m = self.sf.n, self.sf.m
        return [sum((cost[self.basis[k]] * self.T[k][n + i] for k in range(m)), _F0) for i in range(m)]

    def reduced(self, cost: Sequence[Fraction], j: int) -> Fraction:
        return cost[j] - sum((cost[self.basis[k]] * self.T[k][j] for k in range(len(self.T))), _F0)

    def run(self, cost: Sequence[Fraction]):
        """Bland's rule.  Returns None at optimality or the unbounded column."""
        while True:
            enter = None
            for j in range(self.ncols):
                if self.allowed[j] and j not in self.basis and self.reduced(cost, j) < 0:
                    enter = j
                    break
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            self.pivot(best[1], enter)

    def solution(self) -> list[Fraction]:
        x = [_F0] * self.ncols
        for i, bv in enumerate(self.basis):
            x[bv] = self.T[i][-1]
        return x


def solve_lp(lp: LinearProgram) -> SolveOutcome:
    """Exact optimum (or infeasibility/unboundedness) with a certificate."""
    for j in range(lp.nvars):
        lo, up = lp.lower[j], lp.upper[j]
        if lo is not None and up is not None and up < lo:
            # empty box: certificate is the crossed bound itself
            return SolveOutcome(INFEASIBLE, certificate={"kind": "bounds", "var": j})
    sf = _StandardForm(lp)
    tab = _Tableau(sf)
    n, m = sf.n, sf.m
    phase1 = [_F0] * n + [Fraction(1)] * m
    tab.run(phase1)
    x = tab.solution()
    w = sum(x[n:], _F0)
    if w > 0:
        y = sf.duals_to_original(tab.duals(phase1))
        return SolveOutcome(INFEASIBLE, certificate={"kind": "farkas", "y": y})
    # drive zero-level artificials out of the basis
    for r in range(m):
        if tab.basis[r] >= n:
            for j in range(n):
                if tab.T[r][j] != 0:
                    tab.pivot(r, j)
                    break
    for j in range(n, n + m):
        tab.allowed[j] = False
    cost = sf.c + [_F0] * m
    enter = tab.run(cost)
    xs = tab.solution()
    x_orig = sf.to_original(xs[:n])
    if enter is not None:
        d = [_F0] * (n + m)
        d[enter] = Fraction(1)
        for i, bv in enumerate(tab.basis):
            d[bv] = -tab.T[i][enter]
        direction = sf.to_original(d[:n], direction=True)
        return SolveOutcome(UNBOUNDED, x=x_orig, certificate={"kind": "ray", "x": x_orig, "direction": direction})
    y = sf.duals_to_original(tab.duals(cost))
    value = linalg.dot(lp.c, x_orig)
    return SolveOutcome(OPTIMAL, value=value, x=x_orig, certificate={"kind": "dual", "y": y})


# ---------------------------------------------------------------------------
# certificate checking


def _row_ok(sense: str, lhs: Fraction, rhs: Fraction) -> bool:
    return lhs <= rhs if sense == "<=" else lhs >= rhs if sense == ">=" else lhs == rhs


def is_feasible(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.nvars:
        return False
    for j, v in enumerate(x):
        if lp.lower[j] is not None and v < lp.lower[j]:
            return False
        if lp.upper[j] is not None and v > lp.upper[j]:
            return False
    return all(_row_ok(s, linalg.dot(row, x), b) for row, s, b in zip(lp.A, lp.senses, lp.rhs))


def _signs_ok(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    for s, v in zip(lp.senses, y):
        if (s == ">=" and v < 0) or (s == "<=" and v > 0):
            return False
    return len(y) == len(lp.senses)


def _box_extreme(coef: Sequence[Fraction], lower, upper, maximize: bool) -> Fraction | None:
    total = _F0
    for g, lo, up in zip(coef, lower, upper):
        if g == 0:
            continue
        pick = up if (g > 0) == maximize else lo
        if pick is None:
            return None
        total += g * pick
    return total


def lagrangian_bound(lp: LinearProgram, y: Sequence[Fraction]) -> Fraction | None:
    """``b.y + min_{box} (c - A^T y).x``; a lower bound on the optimum."""
    if not _signs_ok(lp, y):
        return None
    g = linalg.matvec(linalg.transpose(lp.A), y) if lp.A else [_F0] * lp.nvars
    r = [cj - gj for cj, gj in zip(lp.c, g)]
    m = _box_extreme(r, lp.lower, lp.upper, maximize=False)
    return None if m is None else linalg.dot(lp.rhs, y) + m


def verify(lp: LinearProgram, out: SolveOutcome) -> bool:
    """Re-check an LP outcome's certificate exactly against ``lp``."""
    cert = out.certificate
    if out.status == OPTIMAL:
        if not is_feasible(lp, out.x):
            return False
        bound = lagrangian_bound(lp, cert["y"])
        return bound is not None and bound == linalg.dot(lp.c, out.x) == out.value
    if out.status == INFEASIBLE:
        if cert.get("kind") == "bounds":
            j = cert["var"]
            return lp.lower[j] is not None and lp.upper[j] is not None and lp.upper[j] < lp.lower[j]
        y = cert["y"]
        if not _signs_ok(lp, y):
            return False
        g = linalg.matvec(linalg.transpose(lp.A), y) if lp.A else [_F0] * lp.nvars
        mx = _box_extreme(g, lp.lower, lp.upper, maximize=True)
        return mx is not None and mx < linalg.dot(lp.rhs, y)
    if out.status == UNBOUNDED:
        x, d = cert["x"], cert["direction"]
        if not is_feasible(lp, x) or linalg.dot(lp.c, d) >= 0:
            return False
        for j, v in enumerate(d):
            if (lp.lower[j] is not None and v < 0) or (lp.upper[j] is not None and v > 0):
                return False
        for row, s in zip(lp.A, lp.senses):
            ad = linalg.dot(row, d)
            if (s == "=" and ad != 0) or (s == ">=" and ad < 0) or (s == "<=" and ad > 0):
                return False
        return True
    return False


# ---------------------------------------------------------------------------
# branch and bound


def _is_int(v: Fraction) -> bool:
    return v.denominator == 1


def solve_mip(mip: MipProblem, node_cap: int = DEFAULT_NODE_CAP) -> SolveOutcome:
    """Depth-first branch-and-bound; branches on the lowest-index fractional
    integer variable, down-branch first.  Deterministic."""
    lp = mip.lp
    lower0 = list(lp.lower)
    upper0 = list(lp.upper)
    for j, isint in enumerate(mip.integer):
        if isint:
            if lower0[j] is not None:
                lower0[j] = Fraction(math.ceil(lower0[j]))
            if upper0[j] is not None:
                upper0[j] = Fraction(math.floor(upper0[j]))
    stack: list[tuple[list, list, Fraction | None]] = [(lower0, upper0, None)]
    best: SolveOutcome | None = None
    nodes = 0
    while stack:
        if nodes >= node_cap:
            open_bounds = [b for _, _, b in stack if b is not None]
            lo = min(open_bounds) if open_bounds and len(open_bounds) == len(stack) else None
            return SolveOutcome(
                CAP_EXCEEDED,
                value=best.value if best else None,
                x=best.x if best else None,
                certificate={"kind": "partial", "nodes": nodes, "lower_bound": lo,
                             "incumbent": best.value if best else None},
            )
        lower, upper, parent_bound = stack.pop()
        if best is not None and parent_bound is not None and parent_bound >= best.value:
            continue
        nodes += 1
        out = solve_lp(lp.with_bounds(lower, upper))
        if out.status == INFEASIBLE:
            continue
        if out.status == UNBOUNDED:
            return SolveOutcome(UNBOUNDED, x=out.x, certificate=dict(out.certificate, nodes=nodes))
        if best is not None and out.value >= best.value:
            continue
        frac = next((j for j, isint in enumerate(mip.integer) if isint and not _is_int(out.x[j])), None)
        if frac is None:
            best = out
            continue
        v = out.x[frac]
        up_lower = list(lower)
        up_lower[frac] = Fraction(math.floor(v) + 1)
        down_upper = list(upper)
        down_upper[frac] = Fraction(math.floor(v))
        stack.append((up_lower, list(upper), out.value))
        stack.append((list(lower), down_upper, out.value))
    if best is None:
        return SolveOutcome(INFEASIBLE, certificate={"kind": "exhausted", "nodes": nodes})
    return SolveOutcome(OPTIMAL, value=best.value, x=best.x,
                        certificate={"kind": "incumbent", "nodes": nodes, "bound": best.value})


def verify_incumbent(mip: MipProblem, out: SolveOutcome) -> bool:
    """Feasibility and objective of a MIP incumbent (optimality rests on the
    exhaustive search recorded in the certificate)."""
    if out.x is None:
        return False
    if any(isint and not _is_int(v) for isint, v in zip(mip.integer, out.x)):
        return False
    return is_feasible(mip.lp, out.x) and linalg.dot(mip.lp.c, out.x) == out.value


# ---------------------------------------------------------------------------
# group-relaxation MIPs


def period(column: Sequence[Fraction]) -> int:
    """Least ``q > 0`` with ``q * column`` integral."""
    return linalg.common_denominator(column)


def periodicity_bounds(columns: Sequence[Sequence[Fraction]], costs: Sequence[Fraction]) -> list[int | None]:
    """Upper bounds ``q - 1`` for integer variables of a congruence model.

    Lowering such a variable by its period ``q`` keeps the congruence (the
    change is an integer vector) and does not increase a nonnegative cost,
    so some optimum lies in ``{0, ..., q - 1}``.  Negative-cost columns are
    left unbounded.
    """
    return [period(col) - 1 if cost >= 0 else None for col, cost in zip(columns, costs)]
