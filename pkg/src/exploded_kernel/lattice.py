"""Integral affine cones and polygons.

Cones are cut out by integer inequalities a.alpha >= 0; polygons by
rational constraints c + a.alpha <= 0 (optionally strict).  Hilbert bases
of dual cones are computed by bounded lattice enumeration, which is
correct at desk scale because every basis element lies in the zonotope
spanned by any integer generating set of the (pointed) dual cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import _geom
from ._geom import Constraint, Vec
from .errors import CapabilityError, DomainError, UsageError, ValidationError

DESK_SCALE_DIM = 4


@dataclass(frozen=True)
class IntegralCone:
    """Cone {a : a.alpha_i >= 0} with integer inequality rows."""

    m: int
    ineqs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.ineqs)
        for row in rows:
            if len(row) != self.m:
                raise ValidationError("inequality length does not match ambient dim")
        object.__setattr__(self, "ineqs", rows)

    def constraints(self) -> list[Constraint]:
        return [
            (tuple(Fraction(-x) for x in row), Fraction(0), False)
            for row in self.ineqs
            if any(row)
        ]

    def contains(self, a: Sequence) -> bool:
        av = _geom.vec(a)
        return all(_geom.dot(av, row) >= 0 for row in self.ineqs)

    @property
    def dim(self) -> int:
        return _geom.affine_dim(self.constraints(), self.m)

    @property
    def spans_ambient(self) -> bool:
        return self.dim == self.m

    def lineality_basis(self) -> list[tuple[int, ...]]:
        rows = [r for r in self.ineqs if any(r)]
        if not rows:
            return [tuple(int(i == j) for j in range(self.m)) for i in range(self.m)]
        return [_integer_primitive(v) for v in _geom.kernel_basis(rows)]


@dataclass(frozen=True)
class PolygonConstraint:
    c: Fraction
    alpha: tuple[int, ...]
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "alpha", tuple(int(x) for x in self.alpha))


@dataclass(frozen=True)
class ExplodedPolygon:
    """Polyhedron {a : c_i + a.alpha_i <= 0 (or <)} with rational offsets."""

    m: int
    constraints_list: tuple[PolygonConstraint, ...]

    @staticmethod
    def of(m: int, constraints: Sequence) -> "ExplodedPolygon":
        cons = []
        for entry in constraints:
            if isinstance(entry, PolygonConstraint):
                cons.append(entry)
            else:
                c, alpha, strict = entry
                cons.append(PolygonConstraint(Fraction(c), tuple(alpha), bool(strict)))
        return ExplodedPolygon(m, tuple(cons))

    @staticmethod
    def from_cone(cone: IntegralCone) -> "ExplodedPolygon":
        return ExplodedPolygon.of(
            cone.m,
            [(0, tuple(-x for x in row), False) for row in cone.ineqs if any(row)],
        )

    def constraints(self) -> list[Constraint]:
        return [
            (tuple(Fraction(x) for x in con.alpha), con.c, con.strict)
            for con in self.constraints_list
        ]

    def contains(self, a: Sequence) -> bool:
        av = _geom.vec(a)
        for con in self.constraints_list:
            value = con.c + _geom.dot(av, con.alpha)
            if value > 0 or (value == 0 and con.strict):
                return False
        return True

    @property
    def is_empty(self) -> bool:
        return not _geom.feasible(self.constraints(), self.m)

    @property
    def dim(self) -> int:
        return _geom.affine_dim(self.constraints(), self.m)

    @property
    def has_nonempty_interior(self) -> bool:
        return self.dim == self.m


@dataclass(frozen=True)
class Stratum:
    """A face-interior piece: exactly the `tight` constraints hold as equalities."""

    tight: frozenset[int]
    sample: Vec
    dim: int
    is_zero_substratum: bool = False


@dataclass(frozen=True)
class HilbertBasis:
    generators: tuple[tuple[int, ...], ...]
    relations: tuple[tuple[int, ...], ...]


def _integer_primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    fracs = [Fraction(x) for x in v]
    denom = 1
    for x in fracs:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in fracs]
    return _geom.primitive(ints)


def cone_generators(cone: IntegralCone) -> list[tuple[int, ...]]:
    """Integer vectors generating the cone convexly (lineality listed +/-)."""
    m = cone.m
    rows = [r for r in cone.ineqs if any(r)]
    lin = cone.lineality_basis()
    gens = [g for v in lin for g in (v, tuple(-x for x in v))]
    d = m - len(lin)
    if d == 0:
        return gens
    if d == 1:
        # rank 1: rows are +/- multiples of one vector; a ray exists iff all same sign
        base = _geom.primitive(rows[0])
        signs = {_sign_of_multiple(row, base) for row in rows}
        if signs == {1}:
            gens.append(base)
        elif signs == {-1}:
            gens.append(tuple(-x for x in base))
        return gens
    for subset in itertools.combinations(range(len(rows)), d - 1):
        sub = [rows[i] for i in subset]
        if _geom.rank(sub) != d - 1:
            continue
        null = _geom.kernel_basis(sub)
        for cand in null:
            if _geom.rank(lin + [cand]) == len(lin):
                continue  # candidate lies in the lineality space
            w = _integer_primitive(cand)
            for signed in (w, tuple(-x for x in w)):
                if all(_geom.dot(signed, row) >= 0 for row in rows):
                    if signed not in gens:
                        gens.append(signed)
    return gens


def _sign_of_multiple(row, base) -> int:
    for r, b in zip(row, base):
        if b != 0:
            return 1 if Fraction(r, b) > 0 else -1
    return 0


def dual_lattice_membership(cone: IntegralCone):
    """Exact membership test for the dual cone A* (alpha.a >= 0 on all of A)."""
    gens = cone_generators(cone)

    def member(alpha: Sequence[int]) -> bool:
        return all(sum(a * g for a, g in zip(alpha, gen)) >= 0 for gen in gens)

    return member


def dual_cone_hilbert_basis(cone: IntegralCone) -> HilbertBasis:
    """Minimal semigroup generators of A* and a basis of their relation lattice."""
    if cone.m > DESK_SCALE_DIM:
        raise CapabilityError(f"ambient dimension {cone.m} exceeds desk scale")
    if not cone.spans_ambient:
        raise DomainError("dual Hilbert basis requires a full-dimensional cone")
    rows = [_geom.primitive(r) for r in cone.ineqs if any(r)]
    member = dual_lattice_membership(cone)
    if not rows:
        return HilbertBasis(generators=(), relations=())
    bounds = [sum(abs(r[j]) for r in rows) for j in range(cone.m)]
    candidates = []
    for point in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if any(point) and member(point):
            candidates.append(point)
    candidates.sort(key=lambda p: (sum(abs(x) for x in p), p))
    cand_set = set(candidates)
    basis = []
    for h in candidates:
        decomposable = False
        for g in candidates:
            if g == h:
                continue
            diff = tuple(a - b for a, b in zip(h, g))
            if not any(diff):
                continue
            if member(diff):
                decomposable = True
                break
        if not decomposable:
            basis.append(h)
    basis.sort()
    return HilbertBasis(generators=tuple(basis), relations=_relation_lattice(basis, cone.m))


def _relation_lattice(generators: Sequence[tuple[int, ...]], m: int):
    """Integer basis of {r : sum_i r_i * generator_i = 0} via Smith form."""
    k = len(generators)
    if k == 0:
        return ()
    matrix = [[generators[i][row] for i in range(k)] for row in range(m)]
    U, D, V = smith_normal_form(matrix)
    r = sum(1 for i in range(min(m, k)) if D[i][i] != 0)
    relations = []
    for j in range(r, k):
        col = tuple(V[i][j] for i in range(k))
        relations.append(_normalize_sign(col))
    relations.sort()
    return tuple(relations)


def _normalize_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


# --- strata -----------------------------------------------------------------


def _strata_of_constraints(cons: list[Constraint], m: int, skip_strict_tight=True):
    nonstrict_idx = [i for i, con in enumerate(cons) if not con[2]]
    strata = []
    for size in range(len(nonstrict_idx) + 1):
        for subset in itertools.combinations(nonstrict_idx, size):
            chosen = set(subset)
            system: list[Constraint] = []
            for i, (alpha, c, strict) in enumerate(cons):
                if i in chosen:
                    system.append((alpha, c, False))
                    system.append((tuple(-x for x in alpha), -c, False))
                else:
                    system.append((alpha, c, True))
            sample = _geom.sample_point(system, m)
            if sample is None:
                continue
            tight_rows = [cons[i][0] for i in chosen]
            dim = m - (_geom.rank(tight_rows) if tight_rows else 0)
            strata.append((frozenset(chosen), sample, dim))
    strata.sort(key=lambda s: (s[2], sorted(s[0]), s[1]))
    return strata


def cone_faces(cone: IntegralCone) -> list[Stratum]:
    """All strata of the cone, including the zero substratum when present."""
    cons = cone.constraints()
    rows = [r for r in cone.ineqs if any(r)]
    zero_dim = cone.m - (_geom.rank(rows) if rows else 0)
    out = []
    for tight, sample, dim in _strata_of_constraints(cons, cone.m):
        is_zero = dim == zero_dim and all(_geom.dot(sample, r) == 0 for r in rows)
        out.append(Stratum(tight, sample, dim, is_zero))
    return out


def polygon_strata(polygon: ExplodedPolygon) -> list[Stratum]:
    """Strata of the polygon; faces supported on strict constraints are missing."""
    cons = polygon.constraints()
    if not _geom.feasible(cons, polygon.m):
        raise DomainError("polygon is empty")
    return [
        Stratum(tight, sample, dim)
        for tight, sample, dim in _strata_of_constraints(cons, polygon.m)
    ]


def local_cone_at(polygon: ExplodedPolygon, stratum: Stratum) -> IntegralCone:
    """The cone A_k with polygon = sample + A_k near the stratum's sample point."""
    cons = polygon.constraints_list
    for i in stratum.tight:
        if i >= len(cons):
            raise UsageError("stratum does not belong to this polygon")
    sample = stratum.sample
    for i, con in enumerate(cons):
        value = con.c + _geom.dot(sample, con.alpha)
        tight = i in stratum.tight
        if tight and value != 0:
            raise UsageError("stratum sample does not satisfy its tight constraints")
        if not tight and value == 0:
            raise UsageError("stratum tight set is inconsistent with the polygon")
        if value > 0:
            raise UsageError("stratum sample lies outside the polygon")
    rows = [tuple(-x for x in cons[i].alpha) for i in sorted(stratum.tight)]
    return IntegralCone(polygon.m, tuple(rows))


# --- Smith normal form ------------------------------------------------------


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """U, D, V with U.M.V = D diagonal, d_i >= 0 and d_i | d_{i+1}."""
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, a, b, c, d):  # rows i,j <- a*i+b*j, c*i+d*j
        for k in range(n):
            A[i][k], A[j][k] = a * A[i][k] + b * A[j][k], c * A[i][k] + d * A[j][k]
        for k in range(m):
            U[i][k], U[j][k] = a * U[i][k] + b * U[j][k], c * U[i][k] + d * U[j][k]

    def col_op(i, j, a, b, c, d):  # cols i,j <- a*i+b*j, c*i+d*j
        for k in range(m):
            A[k][i], A[k][j] = a * A[k][i] + b * A[k][j], c * A[k][i] + d * A[k][j]
        for k in range(n):
            V[k][i], V[k][j] = a * V[k][i] + b * V[k][j], c * V[k][i] + d * V[k][j]

    def row_sub(i: int, t: int, q: int):
        for k in range(n):
            A[i][k] -= q * A[t][k]
        for k in range(m):
            U[i][k] -= q * U[t][k]

    def col_sub(j: int, t: int, q: int):
        for k in range(m):
            A[k][j] -= q * A[k][t]
        for k in range(n):
            V[k][j] -= q * V[k][t]

    def clear_at(t: int) -> bool:
        """Diagonalize position t; False when the remaining block is zero.

        Plain subtractions handle divisible entries without disturbing the
        cleared row/column; every Bezout step strictly shrinks |pivot|, so
        the outer loop terminates.
        """
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (
                        pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is None:
                return False
            pi, pj = pivot
            if pi != t:
                row_op(t, pi, 0, 1, 1, 0)
            if pj != t:
                col_op(t, pj, 0, 1, 1, 0)
            for i in range(t + 1, m):
                if A[i][t]:
                    if A[i][t] % A[t][t] == 0:
                        row_sub(i, t, A[i][t] // A[t][t])
                    else:
                        g, s, x = _xgcd(A[t][t], A[i][t])
                        row_op(t, i, s, x, -(A[i][t] // g), A[t][t] // g)
            for j in range(t + 1, n):
                if A[t][j]:
                    if A[t][j] % A[t][t] == 0:
                        col_sub(j, t, A[t][j] // A[t][t])
                    else:
                        g, s, x = _xgcd(A[t][t], A[t][j])
                        col_op(t, j, s, x, -(A[t][j] // g), A[t][t] // g)
            if any(A[i][t] for i in range(t + 1, m)) or any(
                A[t][j] for j in range(t + 1, n)
            ):
                continue
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                return True
            row_op(t, offender, 1, 1, 0, 1)

    t = 0
    while t < min(m, n) and clear_at(t):
        t += 1
    for i in range(min(m, n)):
        if A[i][i] < 0:
            for k in range(n):
                A[i][k] = -A[i][k]
            for k in range(m):
                U[i][k] = -U[i][k]
    return U, A, V


def invariant_factors(matrix: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(matrix)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# --- complexes ---------------------------------------------------------------


def _valid_on(cons: list[Constraint], m: int, test: Constraint) -> bool:
    return _geom.constraint_valid(cons, m, test)


def _polyhedra_equal(a: list[Constraint], b: list[Constraint], m: int) -> bool:
    fa, fb = _geom.feasible(a, m), _geom.feasible(b, m)
    if fa != fb:
        return False
    if not fa:
        return True
    return all(_valid_on(a, m, con) for con in b) and all(
        _valid_on(b, m, con) for con in a
    )


def _is_face_of(face: list[Constraint], cell: list[Constraint], m: int) -> bool:
    """face must equal the cell-face cut out by its tight constraints."""
    if not _geom.feasible(face, m):
        return True
    if not all(_valid_on(face, m, con) for con in cell):
        return False
    tight = []
    for alpha, c, strict in cell:
        if _valid_on(face, m, (tuple(-x for x in alpha), -c, False)):
            tight.append((alpha, c))
    carved = list(cell)
    for alpha, c in tight:
        carved.append((tuple(-x for x in alpha), -c, False))
    return _polyhedra_equal(face, carved, m)


def is_complete_complex(cells: Sequence[ExplodedPolygon | IntegralCone]) -> bool:
    """Combinatorial completeness: closed cells meeting along common faces.

    The complex is read as the face closure of the listed cells; a strict
    constraint marks a missing face and defeats completeness.
    """
    polys = [
        ExplodedPolygon.from_cone(c) if isinstance(c, IntegralCone) else c
        for c in cells
    ]
    if not polys:
        return True
    m = polys[0].m
    if any(p.m != m for p in polys):
        raise ValidationError("cells live in different ambient dimensions")
    systems = [p.constraints() for p in polys]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            meet = systems[i] + systems[j]
            if not _geom.feasible(meet, m):
                continue
            if not _is_face_of(meet, systems[i], m) or not _is_face_of(
                meet, systems[j], m
            ):
                raise ValidationError(
                    f"cells {i} and {j} do not intersect in a common face"
                )
    return all(not con.strict for p in polys for con in p.constraints_list)
