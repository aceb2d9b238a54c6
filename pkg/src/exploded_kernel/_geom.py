"""Exact rational polyhedral primitives.

Constraints are (alpha, c, strict) meaning alpha.a + c <= 0 (or < 0 when
strict).  Everything runs over Fractions via Fourier-Motzkin elimination,
which is entirely adequate at desk scale (ambient dimension <= 4).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]
Constraint = tuple[Vec, Fraction, bool]

_INFEASIBLE = object()


def vec(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _canonical(con: Constraint) -> Constraint:
    alpha, c, strict = con
    scale = Fraction(0)
    for x in (*alpha, c):
        if x != 0:
            scale = abs(x)
            break
    if scale == 0:
        return con
    return (tuple(x / scale for x in alpha), c / scale, strict)


def _eliminate(cons: list[Constraint], k: int):
    """Fourier-Motzkin elimination of variable k; returns system or _INFEASIBLE."""
    lowers, uppers, keep = [], [], []
    for alpha, c, strict in cons:
        coeff = alpha[k]
        rest = alpha[:k] + alpha[k + 1 :]
        if coeff == 0:
            if any(x != 0 for x in rest):
                keep.append((rest, c, strict))
            elif c > 0 or (c == 0 and strict):
                return _INFEASIBLE
        elif coeff > 0:
            uppers.append((rest, c, strict, coeff))
        else:
            lowers.append((rest, c, strict, -coeff))
    for lr, lc, ls, lpos in lowers:
        for ur, uc, us, upos in uppers:
            alpha = tuple(lpos * u + upos * l for l, u in zip(lr, ur))
            c = lpos * uc + upos * lc
            strict = ls or us
            if any(x != 0 for x in alpha):
                keep.append((alpha, c, strict))
            elif c > 0 or (c == 0 and strict):
                return _INFEASIBLE
    seen = set()
    out = []
    for con in keep:
        canon = _canonical(con)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return out


def feasible(cons: Sequence[Constraint], m: int) -> bool:
    system: list[Constraint] | object = [
        _canonical((vec(a), Fraction(c), s)) for a, c, s in cons
    ]
    for k in range(m - 1, -1, -1):
        system = _eliminate(system, k)
        if system is _INFEASIBLE:
            return False
    return True


def sample_point(cons: Sequence[Constraint], m: int) -> Optional[Vec]:
    """An exact feasible point respecting strict inequalities, or None."""
    systems = [[_canonical((vec(a), Fraction(c), s)) for a, c, s in cons]]
    for k in range(m - 1, -1, -1):
        nxt = _eliminate(systems[-1], k)
        if nxt is _INFEASIBLE:
            return None
        systems.append(nxt)
    point: list[Fraction] = []
    # systems[m - k] constrains variables 0..k-1; assign forward.
    for k in range(m):
        cons_k = systems[m - 1 - k]
        lo = hi = None
        lo_strict = hi_strict = False
        for alpha, c, strict in cons_k:
            coeff = alpha[k]
            if coeff == 0:
                continue
            value = -(c + dot(alpha[:k], point)) / coeff
            if coeff > 0:
                if hi is None or value < hi:
                    hi, hi_strict = value, strict
                elif value == hi:
                    hi_strict = hi_strict or strict
            else:
                if lo is None or value > lo:
                    lo, lo_strict = value, strict
                elif value == lo:
                    lo_strict = lo_strict or strict
        if lo is None and hi is None:
            point.append(Fraction(0))
        elif lo is None:
            point.append(hi - 1 if hi_strict else min(hi, Fraction(0)))
        elif hi is None:
            point.append(lo + 1 if lo_strict else max(lo, Fraction(0)))
        elif lo < hi:
            point.append((lo + hi) / 2)
        elif lo == hi and not (lo_strict or hi_strict):
            point.append(lo)
        else:
            return None
    return tuple(point)


def constraint_valid(cons: Sequence[Constraint], m: int, test: Constraint) -> bool:
    """Whether alpha.a + c <= 0 (or <) holds everywhere on the polyhedron."""
    alpha, c, strict = test
    negated = (tuple(-x for x in vec(alpha)), -Fraction(c), not strict)
    return not feasible([*cons, negated], m)


def implicit_equalities(cons: Sequence[Constraint], m: int) -> list[int]:
    """Indices of non-strict constraints that hold with equality everywhere."""
    out = []
    for i, (alpha, c, strict) in enumerate(cons):
        if strict:
            continue
        if constraint_valid(cons, m, (tuple(-x for x in vec(alpha)), -Fraction(c), False)):
            out.append(i)
    return out


def relative_interior_point(cons: Sequence[Constraint], m: int) -> Optional[Vec]:
    """Sample point in the relative interior (implicit equalities kept tight)."""
    system = [(vec(a), Fraction(c), s) for a, c, s in cons]
    if not feasible(system, m):
        return None
    eqs = set(implicit_equalities(system, m))
    refined: list[Constraint] = []
    for i, (alpha, c, strict) in enumerate(system):
        if i in eqs:
            refined.append((alpha, c, False))
            refined.append((tuple(-x for x in alpha), -c, False))
        else:
            refined.append((alpha, c, True))
    return sample_point(refined, m)


def rank(rows: Sequence[Sequence]) -> int:
    mat = [list(map(Fraction, r)) for r in rows]
    r = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def affine_dim(cons: Sequence[Constraint], m: int) -> int:
    """Dimension of the polyhedron, or -1 if empty."""
    system = [(vec(a), Fraction(c), s) for a, c, s in cons]
    if not feasible(system, m):
        return -1
    eq_rows = [system[i][0] for i in implicit_equalities(system, m)]
    if not eq_rows:
        return m
    return m - rank(eq_rows)


def kernel_basis(rows: Sequence[Sequence]) -> list[Vec]:
    """Rational basis of the kernel of the row matrix (solutions of rows.x = 0)."""
    if not rows:
        return []
    n = len(rows[0])
    mat = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for prow, pcol in enumerate(pivots):
            v[pcol] = -mat[prow][fcol]
        basis.append(tuple(v))
    return basis


def convex_hull_2d(points: Sequence[tuple]) -> list[tuple]:
    """Andrew monotone chain; returns hull vertices counterclockwise."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return list(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def doubled_area_2d(hull: Sequence[tuple]) -> Fraction:
    """Twice the area of a convex polygon given in order (lattice area)."""
    if len(hull) < 3:
        return Fraction(0)
    total = Fraction(0)
    for i, (x0, y0) in enumerate(hull):
        x1, y1 = hull[(i + 1) % len(hull)]
        total += Fraction(x0) * Fraction(y1) - Fraction(x1) * Fraction(y0)
    return abs(total)
