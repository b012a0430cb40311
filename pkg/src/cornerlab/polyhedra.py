"""Double description method over the rationals.

Only pointed cones are handled directly; callers reduce to that case by
working in coordinates of the affine hull.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from cornerlab import linalg

Ray = tuple[Fraction, ...]


def _normalize(v: Sequence[Fraction]) -> Ray:
    return tuple(Fraction(x) for x in linalg.primitive_integer(v))


def extreme_rays(A: Sequence[Sequence[Fraction]], dim: int) -> list[Ray]:
    """Extreme rays of the pointed cone ``{x in R^dim : A x >= 0}``.

    Rays are returned as primitive integer vectors, sorted.  Raises
    ValueError when the cone is not pointed (``rank A < dim``).
    """
    A = [list(map(Fraction, row)) for row in A]
    if dim == 0:
        return []
    basis_idx = linalg.independent_rows(A)
    if len(basis_idx) < dim:
        raise ValueError("cone is not pointed")
    B = [A[i] for i in basis_idx]
    Binv = linalg.inverse(B)
    rays = [_normalize([Binv[r][c] for r in range(dim)]) for c in range(dim)]
    processed = list(basis_idx)
    rest = [i for i in range(len(A)) if i not in set(basis_idx)]
    for i in rest:
        a = A[i]
        vals = [linalg.dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = pos + zero
        if neg:
            tight = {r: frozenset(k for k in processed if linalg.dot(A[k], r) == 0) for r in rays}
            pos_vals = [(r, v) for r, v in zip(rays, vals) if v > 0]
            for p, vp in pos_vals:
                for n, vn in neg:
                    common = tight[p] & tight[n]
                    # algebraic adjacency test
                    if dim < 2 or len(common) < dim - 2:
                        continue
                    if linalg.rank([A[k] for k in common]) != dim - 2:
                        continue
                    combo = [vp * x - vn * y for x, y in zip(n, p)]
                    new.append(_normalize(combo))
        processed.append(i)
        rays = sorted(set(new))
    return sorted(rays)


def h_to_v(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], dim: int):
    """Vertices and extreme rays of ``{x : A x >= b}`` (must be pointed)."""
    rows = [list(map(Fraction, row)) + [-Fraction(bi)] for row, bi in zip(A, b)]
    rows.append([Fraction(0)] * dim + [Fraction(1)])
    vertices, rays = [], []
    for r in extreme_rays(rows, dim + 1):
        t = r[-1]
        if t > 0:
            vertices.append(tuple(x / t for x in r[:-1]))
        else:
            rays.append(r[:-1])
    return sorted(vertices), sorted(rays)


def v_to_h(points: Sequence[Sequence[Fraction]], rays: Sequence[Sequence[Fraction]], dim: int):
    """Facets ``(a, a0)`` meaning ``a.x >= a0`` of a full-dimensional
    ``conv(points) + cone(rays)``; ``a`` is a primitive integer vector."""
    gens = [list(map(Fraction, p)) + [Fraction(1)] for p in points]
    gens += [list(map(Fraction, r)) + [Fraction(0)] for r in rays]
    facets = []
    for z in extreme_rays(gens, dim + 1):
        a, beta = z[:-1], z[-1]
        if all(x == 0 for x in a):
            continue
        facets.append((tuple(a), -beta))
    return sorted(facets)
