"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``.  Everything here is small-scale
(tens of rows/columns) and favours clarity over speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def frac_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matvec(a: Matrix, x: Sequence[Fraction]) -> Vector:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [row[:] for row in a]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of ``{x : a x = 0}``.

    ``ncols`` is needed when ``a`` has no rows.
    """
    if ncols is None:
        ncols = len(a[0])
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def row_basis(a: Matrix) -> Matrix:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    return rref(a)[0] if a else []


def solve(a: Matrix, b: Sequence[Fraction]) -> Vector | None:
    """One solution of ``a x = b`` (free variables set to 0), or None."""
    if not a:
        return None if any(v != 0 for v in b) else []
    ncols = len(a[0])
    aug = [row[:] + [Fraction(v)] for row, v in zip(a, b)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[-1]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def independent_rows(rows: Sequence[Sequence[Fraction]]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset of ``rows``."""
    chosen: list[int] = []
    basis: Matrix = []
    for i, row in enumerate(rows):
        trial = basis + [list(row)]
        if rank(trial) > len(basis):
            basis = row_basis(trial)
            chosen.append(i)
    return chosen


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


def common_denominator(values) -> int:
    q = 1
    for v in values:
        q = lcm(q, Fraction(v).denominator)
    return q


def primitive_integer(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    q = common_denominator(v)
    ints = [int(x * q) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return ints
    return [x // g for x in ints]
