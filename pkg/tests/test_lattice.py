"""Cones, Hilbert bases, strata, Smith form, and complexes."""

import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

from exploded_kernel.errors import CapabilityError, DomainError, UsageError, ValidationError
from exploded_kernel.lattice import (
    ExplodedPolygon,
    IntegralCone,
    cone_faces,
    dual_cone_hilbert_basis,
    invariant_factors,
    is_complete_complex,
    local_cone_at,
    polygon_strata,
    smith_normal_form,
)


# --- independent oracle for 2D dual cones ------------------------------------


def primitive2(v):
    g = gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g) if g else v


def cone2_rays(u, v):
    """Extreme rays of {a : a.u >= 0, a.v >= 0} by direct rotation.

    Returns (rays, lineality); independent of the package's generator code.
    """
    u = primitive2(u) if any(u) else None
    v = primitive2(v) if any(v) else None
    if u is None and v is None:
        return [], [(1, 0), (0, 1)]
    if u is None or v is None or u == v:
        w = u or v
        return [w], [(-w[1], w[0])]
    if u == (-v[0], -v[1]):
        return [], [(-u[1], u[0])]  # a line, not full-dimensional
    ru = (-u[1], u[0])
    if ru[0] * v[0] + ru[1] * v[1] < 0:
        ru = (-ru[0], -ru[1])
    rv = (-v[1], v[0])
    if rv[0] * u[0] + rv[1] * u[1] < 0:
        rv = (-rv[0], -rv[1])
    return [ru, rv], []


def oracle_hilbert_2d(u, v, box=10):
    """Brute-force dual Hilbert basis: lattice points in [-box, box]^2 that
    satisfy both dual inequalities, then greedy semigroup reduction."""
    rays, lineality = cone2_rays(u, v)
    if lineality and rays == []:
        if not any(u) and not any(v):
            return set()
        return None  # not full-dimensional; out of the operation's domain

    def member(p):
        return all(p[0] * r[0] + p[1] * r[1] >= 0 for r in rays) and all(
            p[0] * l[0] + p[1] * l[1] == 0 for l in lineality
        )

    points = [
        (x, y)
        for x in range(-box, box + 1)
        for y in range(-box, box + 1)
        if (x, y) != (0, 0) and member((x, y))
    ]
    points.sort(key=lambda p: (abs(p[0]) + abs(p[1]), p))
    basis = []
    for p in points:
        if any(member((p[0] - q[0], p[1] - q[1])) and (p[0] - q[0], p[1] - q[1]) != (0, 0)
               for q in points if q != p):
            continue
        basis.append(p)
    return set(basis)


def test_dual_cone_spec_examples():
    # model T^m_n: first n standard basis vectors, no relations
    cone = IntegralCone(3, ((1, 0, 0), (0, 1, 0)))
    hb = dual_cone_hilbert_basis(cone)
    assert set(hb.generators) == {(1, 0, 0), (0, 1, 0)}
    assert hb.relations == ()
    # all of space: empty generating set
    assert dual_cone_hilbert_basis(IntegralCone(2, ())).generators == ()
    # the (2,-1) cone
    hb = dual_cone_hilbert_basis(IntegralCone(2, ((0, 1), (2, -1))))
    assert set(hb.generators) == {(0, 1), (1, 0), (2, -1)}
    assert hb.relations == ((1, -2, 1),)


def test_dual_cone_matches_oracle_sample():
    rng = random.Random(4)
    tested = 0
    while tested < 60:
        u = (rng.randint(-3, 3), rng.randint(-3, 3))
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        cone = IntegralCone(2, (u, v))
        expected = oracle_hilbert_2d(u, v)
        if expected is None:
            assert not cone.spans_ambient
            with pytest.raises(DomainError):
                dual_cone_hilbert_basis(cone)
            continue
        hb = dual_cone_hilbert_basis(cone)
        assert set(hb.generators) == expected, (u, v)
        tested += 1


def test_dual_cone_minimality_and_relations():
    cone = IntegralCone(2, ((0, 1), (3, -2)))
    hb = dual_cone_hilbert_basis(cone)
    gens = list(hb.generators)

    def in_semigroup(p, basis):
        # bounded nonnegative integer combinations
        from itertools import product

        bound = 12
        for coeffs in product(range(bound), repeat=len(basis)):
            s = (
                sum(c * g[0] for c, g in zip(coeffs, basis)),
                sum(c * g[1] for c, g in zip(coeffs, basis)),
            )
            if s == p:
                return True
        return False

    for g in gens:
        others = [h for h in gens if h != g]
        assert not in_semigroup(g, others), f"{g} is redundant"
    # relations span the kernel lattice: check via Smith form divisors
    matrix = [[g[row] for g in gens] for row in range(2)]
    factors = [d for d in invariant_factors(matrix) if d]
    assert all(d == 1 for d in factors)
    for rel in hb.relations:
        assert all(
            sum(r * g[row] for r, g in zip(rel, gens)) == 0 for row in range(2)
        )


def test_dual_cone_caps():
    with pytest.raises(CapabilityError):
        dual_cone_hilbert_basis(IntegralCone(5, ((1, 0, 0, 0, 0),)))
    with pytest.raises(DomainError):
        dual_cone_hilbert_basis(IntegralCone(2, ((1, 0), (-1, 0))))


def test_cone_faces_examples():
    quad = cone_faces(IntegralCone(2, ((1, 0), (0, 1))))
    assert len(quad) == 4
    dims = sorted(s.dim for s in quad)
    assert dims == [0, 1, 1, 2]
    zero = [s for s in quad if s.is_zero_substratum]
    assert len(zero) == 1 and zero[0].dim == 0
    assert len(cone_faces(IntegralCone(2, ()))) == 1
    half = cone_faces(IntegralCone(2, ((0, 1),)))
    assert sorted(s.dim for s in half) == [1, 2]
    line = [s for s in half if s.dim == 1][0]
    assert line.is_zero_substratum
    assert all(x == 0 for x in [line.sample[1]])


def test_face_lattice_closed_under_intersection():
    cone = IntegralCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    faces = cone_faces(cone)
    tights = {s.tight for s in faces}
    for a, b in itertools.combinations(tights, 2):
        assert a | b in tights
    rows = list(cone.ineqs)
    for s in faces:
        tight_rows = [rows[i] for i in s.tight]
        from exploded_kernel import _geom

        assert s.dim + (_geom.rank(tight_rows) if tight_rows else 0) == 3


UNIT_SQUARE = ExplodedPolygon.of(
    2,
    [
        (0, (-1, 0), False),
        (0, (0, -1), False),
        (-1, (1, 0), False),
        (-1, (0, 1), False),
    ],
)


def test_polygon_strata_examples():
    strata = polygon_strata(UNIT_SQUARE)
    assert len(strata) == 9
    assert sorted(s.dim for s in strata) == [0, 0, 0, 0, 1, 1, 1, 1, 2]
    half_open = ExplodedPolygon.of(1, [(0, (-1,), False), (-2, (1,), True)])
    strata = polygon_strata(half_open)
    assert len(strata) == 2
    assert sorted(s.dim for s in strata) == [0, 1]
    point = ExplodedPolygon.of(1, [(0, (-1,), False), (0, (1,), False)])
    assert len(polygon_strata(point)) == 1
    with pytest.raises(DomainError):
        polygon_strata(ExplodedPolygon.of(1, [(1, (1,), False), (1, (-1,), False)]))


def test_local_cone_examples():
    strata = polygon_strata(UNIT_SQUARE)
    interior = [s for s in strata if s.dim == 2][0]
    assert local_cone_at(UNIT_SQUARE, interior).ineqs == ()
    origin = [s for s in strata if s.dim == 0 and all(x == 0 for x in s.sample)][0]
    cone = local_cone_at(UNIT_SQUARE, origin)
    assert set(cone.ineqs) == {(1, 0), (0, 1)}
    edge = [
        s
        for s in strata
        if s.dim == 1 and s.sample[0] == 0 and 0 < s.sample[1] < 1
    ][0]
    assert set(local_cone_at(UNIT_SQUARE, edge).ineqs) == {(1, 0)}
    # a neighborhood check: sample + small cone points stay in the polygon
    eps = Fraction(1, 100)
    for direction in [(1, 0), (0, 1), (1, 1)]:
        p = tuple(o + eps * d for o, d in zip(origin.sample, direction))
        assert UNIT_SQUARE.contains(p)


def test_local_cone_rejects_foreign_stratum():
    other = ExplodedPolygon.of(2, [(0, (-1, 0), False)])
    stratum = polygon_strata(UNIT_SQUARE)[0]
    with pytest.raises(UsageError):
        local_cone_at(other, stratum)


def test_smith_normal_form_examples():
    _, D, _ = smith_normal_form([[2]])
    assert D == [[2]]
    _, D, _ = smith_normal_form([[1, 1], [1, -1]])
    assert D == [[1, 0], [0, 2]]
    _, D, _ = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]]


def test_smith_normal_form_reconstruction_random():
    rng = random.Random(12)
    for _ in range(300):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        U, D, V = smith_normal_form(M)
        # exact product check
        UM = [[sum(U[i][k] * M[k][j] for k in range(m)) for j in range(n)] for i in range(m)]
        UMV = [[sum(UM[i][k] * V[k][j] for k in range(n)) for j in range(n)] for i in range(m)]
        assert UMV == D
        diag = [D[i][i] for i in range(min(m, n))]
        for a, b in zip(diag, diag[1:]):
            assert a >= 0
            assert (b % a == 0) if a else b == 0
        if m == n:
            det = _det_int(M)
            prod = 1
            for d in diag:
                prod *= d
            assert abs(det) == prod


def _det_int(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        total += (-1) ** j * M[0][j] * _det_int(minor)
    return total


def test_complete_complex_examples():
    closed = ExplodedPolygon.of(1, [(0, (-1,), False), (-1, (1,), False)])
    assert is_complete_complex([closed]) is True
    half_open = ExplodedPolygon.of(1, [(0, (-1,), False), (-2, (1,), True)])
    assert is_complete_complex([half_open]) is False
    fan = [
        IntegralCone(2, ((1, 0), (0, 1))),
        IntegralCone(2, ((1, 0), (0, 1), (-1, 0))),
        IntegralCone(2, ((0, 1), (1, 0), (0, -1))),
        IntegralCone(2, ((1, 0), (-1, 0), (0, 1), (0, -1))),
    ]
    assert is_complete_complex(fan) is True


def test_complete_complex_validation_error():
    # [0,2] and [1,3] overlap in [1,2], which is not a face of either
    a = ExplodedPolygon.of(1, [(0, (-1,), False), (-2, (1,), False)])
    b = ExplodedPolygon.of(1, [(1, (-1,), False), (-3, (1,), False)])
    with pytest.raises(ValidationError):
        is_complete_complex([a, b])
