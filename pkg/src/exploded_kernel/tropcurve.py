"""Min-plus polynomials, corner loci, balancing, and desk-scale prevarieties.

The min convention is fixed throughout: a polynomial evaluates to
min_alpha(y_alpha + alpha.a), and the corner locus is the set where the
minimum is achieved at least twice.  Weights on locus edges are lattice
lengths of the dual Newton-subdivision edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import _geom
from ._geom import Vec
from .errors import CapabilityError, DomainError, ValidationError
from .semiring import TropicalNumber


@dataclass(frozen=True)
class TropicalPolynomial:
    """Terms (y, alpha) representing min_alpha(y_alpha + alpha.a)."""

    n: int
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @staticmethod
    def of(n: int, terms) -> "TropicalPolynomial":
        canon = []
        for y, alpha in terms:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n:
                raise ValidationError("term exponent arity mismatch")
            canon.append((Fraction(y), alpha))
        if not canon:
            raise ValidationError("polynomial needs at least one term")
        return TropicalPolynomial(n, tuple(canon))

    def normalized(self) -> "TropicalPolynomial":
        """Merge duplicate exponents by semiring addition (minimum y)."""
        best: dict[tuple[int, ...], Fraction] = {}
        for y, alpha in self.terms:
            if alpha not in best or y < best[alpha]:
                best[alpha] = y
        merged = tuple(sorted(((y, alpha) for alpha, y in best.items()), key=lambda t: t[1]))
        return TropicalPolynomial(self.n, merged)


@dataclass(frozen=True)
class AchievingSet:
    point: Vec
    exponents: tuple[tuple[int, ...], ...]
    value: Fraction


def eval_poly(poly: TropicalPolynomial, a: Sequence) -> TropicalNumber:
    av = _geom.vec(a)
    if len(av) != poly.n:
        raise ValidationError("evaluation point arity mismatch")
    return TropicalNumber(min(y + _geom.dot(alpha, av) for y, alpha in poly.terms))


def achieving_set(poly: TropicalPolynomial, a: Sequence) -> AchievingSet:
    av = _geom.vec(a)
    if len(av) != poly.n:
        raise ValidationError("evaluation point arity mismatch")
    values = [(y + _geom.dot(alpha, av), alpha) for y, alpha in poly.normalized().terms]
    vmin = min(v for v, _ in values)
    exps = tuple(sorted(alpha for v, alpha in values if v == vmin))
    return AchievingSet(av, exps, vmin)


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    direction: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class GraphRay:
    v: int
    direction: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class BalancedGraph:
    n: int
    vertices: tuple[Vec, ...]
    edges: tuple[GraphEdge, ...]
    rays: tuple[GraphRay, ...]


@dataclass(frozen=True)
class DualCell:
    vertex: int
    exponents: tuple[tuple[int, ...], ...]
    hull: tuple[tuple[int, ...], ...]
    area2: int


@dataclass(frozen=True)
class DualEdgeRecord:
    endpoints: tuple[tuple[int, ...], tuple[int, ...]]
    kind: str  # "edge" or "ray"
    locus_index: int


@dataclass(frozen=True)
class DualSubdivision:
    newton_hull: tuple[tuple[int, ...], ...]
    newton_area2: int
    cells: tuple[DualCell, ...]
    edges: tuple[DualEdgeRecord, ...]


@dataclass(frozen=True)
class CornerLocus:
    graph: BalancedGraph
    dual: DualSubdivision


def _lattice_length(v: tuple[int, ...]) -> int:
    return gcd(abs(v[0]), abs(v[1]))


def _perp(v: tuple[int, ...]) -> tuple[int, int]:
    return (-v[1], v[0])


def corner_locus(poly: TropicalPolynomial) -> CornerLocus:
    """Weighted corner locus of a planar min-plus polynomial plus its dual."""
    if poly.n != 2:
        raise CapabilityError("corner locus is implemented for n = 2")
    if len(poly.terms) < 2:
        raise DomainError("corner locus needs at least two terms")
    norm = poly.normalized()
    exps = [alpha for _, alpha in norm.terms]
    hull_all = _geom.convex_hull_2d(exps)
    newton_area2 = int(_geom.doubled_area_2d(hull_all))
    if len(norm.terms) == 1:
        dual = DualSubdivision(tuple(hull_all), newton_area2, (), ())
        return CornerLocus(BalancedGraph(2, (), (), ()), dual)
    base = exps[0]
    diffs = [tuple(e - b for e, b in zip(alpha, base)) for alpha in exps[1:]]
    if _geom.rank(diffs) <= 1:
        return _collinear_locus(norm, hull_all, newton_area2)
    return _full_locus(norm, hull_all, newton_area2)


def _collinear_locus(poly: TropicalPolynomial, hull_all, newton_area2) -> CornerLocus:
    base = poly.terms[0][1]
    direction = None
    for _, alpha in poly.terms[1:]:
        diff = tuple(a - b for a, b in zip(alpha, base))
        if any(diff):
            direction = _geom.primitive(diff)
            break
    e2 = sum(x * x for x in direction)
    lifted = {}
    for y, alpha in poly.terms:
        diff = tuple(a - b for a, b in zip(alpha, base))
        s = sum(d * x for d, x in zip(diff, direction))
        assert s % e2 == 0
        s //= e2
        if s not in lifted or y < lifted[s][0]:
            lifted[s] = (y, alpha)
    pts = sorted(lifted.items())
    # lower convex hull of (s, y): the envelope of lines y + s*u
    hull: list[tuple[int, Fraction, tuple[int, ...]]] = []
    for s, (y, alpha) in pts:
        while len(hull) >= 2:
            (s1, y1, _), (s2, y2, _) = hull[-2], hull[-1]
            # drop middle point if it is not strictly below the chord
            if (y2 - y1) * (s - s1) >= (y - y1) * (s2 - s1):
                hull.pop()
            else:
                break
        hull.append((s, y, alpha))
    vertices: list[Vec] = []
    rays: list[GraphRay] = []
    dual_edges: list[DualEdgeRecord] = []
    d = _perp(direction)
    for (s1, y1, a1), (s2, y2, a2) in zip(hull, hull[1:]):
        u_star = -(y2 - y1) / Fraction(s2 - s1)
        base_point = tuple(u_star * x / e2 for x in direction)
        idx = len(vertices)
        vertices.append(base_point)
        weight = abs(s2 - s1)
        rays.append(GraphRay(idx, d, weight))
        rays.append(GraphRay(idx, tuple(-x for x in d), weight))
        dual_edges.append(DualEdgeRecord((a1, a2), "line", idx))
    graph = BalancedGraph(2, tuple(vertices), (), tuple(rays))
    dual = DualSubdivision(tuple(hull_all), newton_area2, (), tuple(dual_edges))
    return CornerLocus(graph, dual)


def _full_locus(poly: TropicalPolynomial, hull_all, newton_area2) -> CornerLocus:
    terms = poly.terms
    pairs = list(itertools.combinations(range(len(terms)), 2))
    candidates: set[Vec] = set()
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        yi, ai = terms[i]
        yj, aj = terms[j]
        yk, ak = terms[k]
        yl, al = terms[l]
        r1 = (ai[0] - aj[0], ai[1] - aj[1], yj - yi)
        r2 = (ak[0] - al[0], ak[1] - al[1], yl - yk)
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0:
            continue
        x = Fraction(r1[2] * r2[1] - r1[1] * r2[2], det)
        y = Fraction(r1[0] * r2[2] - r1[2] * r2[0], det)
        candidates.add((x, y))
    vertices: list[Vec] = []
    achieving: list[tuple[tuple[int, ...], ...]] = []
    for point in sorted(candidates):
        exps = achieving_set(poly, point).exponents
        if len(exps) >= 3 and _geom.rank(
            [tuple(e - b for e, b in zip(alpha, exps[0])) for alpha in exps[1:]]
        ) == 2:
            vertices.append(point)
            achieving.append(exps)
    edges: dict[tuple[int, int], tuple[GraphEdge, tuple]] = {}
    raw_rays: list[tuple[GraphRay, tuple]] = []
    cells: list[DualCell] = []
    for vi, (point, exps) in enumerate(zip(vertices, achieving)):
        hull = _geom.convex_hull_2d(exps)
        cells.append(
            DualCell(vi, exps, tuple(hull), int(_geom.doubled_area_2d(hull)))
        )
        for a, b in zip(hull, hull[1:] + hull[:1]):
            evec = (b[0] - a[0], b[1] - a[1])
            d = _geom.primitive((-evec[1], evec[0]))  # minus the outward normal
            weight = _lattice_length(evec)
            target = None
            best_t = None
            for wj, wpoint in enumerate(vertices):
                if wj == vi:
                    continue
                dx = (wpoint[0] - point[0], wpoint[1] - point[1])
                cross = dx[0] * d[1] - dx[1] * d[0]
                if cross != 0:
                    continue
                t = None
                for comp in range(2):
                    if d[comp]:
                        t = dx[comp] / d[comp]
                        break
                if t is None or t <= 0:
                    continue
                if best_t is None or t < best_t:
                    best_t, target = t, wj
            if target is None:
                raw_rays.append((GraphRay(vi, d, weight), (a, b)))
            else:
                key = (min(vi, target), max(vi, target))
                if key in edges:
                    if edges[key][0].weight != weight:
                        raise ValidationError("inconsistent dual edge weights")
                    continue
                direction = d if vi == key[0] else tuple(-x for x in d)
                edges[key] = (GraphEdge(key[0], key[1], direction, weight), (a, b))
    raw_rays.sort(key=lambda item: (item[0].v, item[0].direction))
    dual_edges = []
    edge_list = []
    for idx, key in enumerate(sorted(edges)):
        edge, endpoints = edges[key]
        edge_list.append(edge)
        dual_edges.append(DualEdgeRecord(endpoints, "edge", idx))
    ray_list = []
    for idx, (ray, endpoints) in enumerate(raw_rays):
        ray_list.append(ray)
        dual_edges.append(DualEdgeRecord(endpoints, "ray", idx))
    graph = BalancedGraph(2, tuple(vertices), tuple(edge_list), tuple(ray_list))
    dual = DualSubdivision(
        tuple(hull_all), newton_area2, tuple(cells), tuple(dual_edges)
    )
    return CornerLocus(graph, dual)


def check_balancing(graph: BalancedGraph):
    """True plus per-vertex defect vectors; directions must be primitive."""
    for item in (*graph.edges, *graph.rays):
        d = item.direction
        if _geom.primitive(d) != tuple(d) or not any(d):
            raise ValidationError(f"direction {d} is not primitive")
        if item.weight <= 0:
            raise ValidationError("weights must be positive integers")
    defects = [[0] * graph.n for _ in graph.vertices]
    for edge in graph.edges:
        for comp in range(graph.n):
            defects[edge.u][comp] += edge.weight * edge.direction[comp]
            defects[edge.v][comp] -= edge.weight * edge.direction[comp]
    for ray in graph.rays:
        for comp in range(graph.n):
            defects[ray.v][comp] += ray.weight * ray.direction[comp]
    balanced = all(not any(row) for row in defects)
    return balanced, tuple(tuple(row) for row in defects)


@dataclass(frozen=True)
class PolyhedralCell:
    """Closed cell of a corner-locus complex with its achieving signature."""

    m: int
    constraints: tuple[tuple[tuple[int, ...], Fraction], ...]  # alpha.a + c <= 0
    dim: int
    sample: Vec
    signature: tuple[tuple[tuple[int, ...], ...], ...]  # achieving set per polynomial

    def geom_constraints(self):
        return [
            (tuple(Fraction(x) for x in alpha), c, False)
            for alpha, c in self.constraints
        ]


def _locus_cells(poly: TropicalPolynomial, polys: Sequence[TropicalPolynomial]):
    """Maximal cells of one corner locus, tagged by full achieving signatures."""
    terms = poly.terms
    out = []
    for i, j in itertools.combinations(range(len(terms)), 2):
        yi, ai = terms[i]
        yj, aj = terms[j]
        cons: list[tuple[tuple[int, ...], Fraction]] = []
        eq_alpha = tuple(a - b for a, b in zip(ai, aj))
        cons.append((eq_alpha, yi - yj))
        cons.append((tuple(-x for x in eq_alpha), yj - yi))
        for k, (yk, ak) in enumerate(terms):
            if k in (i, j):
                continue
            cons.append((tuple(a - b for a, b in zip(ai, ak)), yi - yk))
        geom = [
            (tuple(Fraction(x) for x in alpha), Fraction(c), False) for alpha, c in cons
        ]
        sample = _geom.relative_interior_point(geom, poly.n)
        if sample is None:
            continue
        dim = _geom.affine_dim(geom, poly.n)
        signature = tuple(achieving_set(q, sample).exponents for q in polys)
        out.append(PolyhedralCell(poly.n, tuple(cons), dim, sample, signature))
    return out


def prevariety(polys: Sequence[TropicalPolynomial]) -> list[PolyhedralCell]:
    """Intersection of the corner loci, as maximal cells of a rational complex."""
    polys = [p.normalized() for p in polys]
    if not polys:
        raise ValidationError("prevariety needs at least one polynomial")
    n = polys[0].n
    if any(p.n != n for p in polys):
        raise ValidationError("polynomials live in different variable counts")
    if n > 3:
        raise CapabilityError("prevariety is capped at 3 variables")
    per_poly = [_locus_cells(p, polys) for p in polys]
    cells: dict[tuple, PolyhedralCell] = {}
    for combo in itertools.product(*per_poly):
        cons = tuple(con for cell in combo for con in cell.constraints)
        geom = [
            (tuple(Fraction(x) for x in alpha), Fraction(c), False) for alpha, c in cons
        ]
        sample = _geom.relative_interior_point(geom, n)
        if sample is None:
            continue
        signature = tuple(achieving_set(q, sample).exponents for q in polys)
        if signature in cells:
            continue
        dim = _geom.affine_dim(geom, n)
        cells[signature] = PolyhedralCell(n, cons, dim, sample, signature)
    # maximality: bigger achieving signatures cut out smaller cells
    kept = []
    for sig, cell in cells.items():
        dominated = False
        for other_sig in cells:
            if other_sig == sig:
                continue
            if all(
                set(s_other) <= set(s_this)
                for s_this, s_other in zip(sig, other_sig)
            ):
                dominated = True
                break
        if dominated:
            continue
        kept.append(cell)
    kept.sort(key=lambda c: (-c.dim, c.sample))
    return kept
