"""Refinements as subdivisions of tropical parts.

A validated subdivision induces one chart per piece with identity
transition maps; the map to the parent model is the identity on
coordinates and a bijection on points, so lifting just tags a point with
the piece containing its tropical part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import _geom
from .coordmodel import CoordModel, CoordModelPoint, MonomialMorphism
from .errors import UsageError, ValidationError
from .lattice import ExplodedPolygon, IntegralCone, _polyhedra_equal, _is_face_of

Region = Union[IntegralCone, ExplodedPolygon]


def _as_polygon(region: Region) -> ExplodedPolygon:
    if isinstance(region, IntegralCone):
        return ExplodedPolygon.from_cone(region)
    return region


@dataclass(frozen=True)
class Subdivision:
    parent: Region
    pieces: tuple[Region, ...]

    @property
    def m(self) -> int:
        return self.parent.m


@dataclass(frozen=True)
class SubdivisionReport:
    ok: bool
    violations: tuple[str, ...]


def _facets(cons, m, dim):
    """Facet subsystems of a full-dimensional-in-context polyhedron."""
    out = []
    for alpha, c, strict in cons:
        face = list(cons)
        face.append((tuple(-x for x in alpha), -c, False))
        if _geom.affine_dim(face, m) == dim - 1:
            out.append(face)
    return out


def validate_subdivision(sub: Subdivision) -> SubdivisionReport:
    """Cover plus fan conditions, with a violation report."""
    m = sub.m
    parent = _as_polygon(sub.parent)
    parent_cons = parent.constraints()
    parent_dim = _geom.affine_dim(parent_cons, m)
    violations: list[str] = []
    if not sub.pieces:
        violations.append("subdivision has no pieces")
    pieces = [_as_polygon(p) for p in sub.pieces]
    systems = [p.constraints() for p in pieces]
    for i, (piece, cons) in enumerate(zip(pieces, systems)):
        if piece.m != m:
            violations.append(f"piece {i} has mismatched ambient dimension")
            continue
        d = _geom.affine_dim(cons, m)
        if d < parent_dim:
            violations.append(f"piece {i} has empty interior in the parent (dim {d})")
        for con in parent_cons:
            if not _geom.constraint_valid(cons, m, con):
                violations.append(f"piece {i} is not contained in the parent")
                break
    for i, j in itertools.combinations(range(len(pieces)), 2):
        meet = systems[i] + systems[j]
        dim_meet = _geom.affine_dim(meet, m)
        if dim_meet < 0:
            continue
        if dim_meet >= parent_dim:
            violations.append(f"pieces {i} and {j} overlap in codimension 0")
            continue
        if not _is_face_of(meet, systems[i], m) or not _is_face_of(meet, systems[j], m):
            violations.append(f"pieces {i} and {j} do not meet in a common face")
    if not violations:
        violations.extend(_cover_violations(parent_cons, parent_dim, systems, m))
    return SubdivisionReport(not violations, tuple(violations))


def _cover_violations(parent_cons, parent_dim, systems, m) -> list[str]:
    """Facet matching: every interior piece facet must be shared by a neighbor."""
    out = []
    for i, cons in enumerate(systems):
        for face in _facets(cons, m, parent_dim):
            on_boundary = any(
                _geom.constraint_valid(
                    face, m, (tuple(-x for x in alpha), -c, False)
                )
                for alpha, c, strict in parent_cons
            )
            if on_boundary:
                continue
            matched = any(
                j != i
                and all(_geom.constraint_valid(face, m, con) for con in other)
                for j, other in enumerate(systems)
            )
            if not matched:
                point = _geom.relative_interior_point(face, m)
                out.append(
                    f"pieces do not cover the parent near piece {i} facet at {point}"
                )
    return out


@dataclass(frozen=True)
class RefinedModel:
    parent: CoordModel
    subdivision: Subdivision
    charts: tuple[CoordModel, ...]


@dataclass(frozen=True)
class LiftedPoint:
    piece: int
    point: CoordModelPoint


def refine_model(model: CoordModel, sub: Subdivision) -> RefinedModel:
    """One chart per piece; transitions and the parent map are identities."""
    report = validate_subdivision(sub)
    if not report.ok:
        raise ValidationError("; ".join(report.violations))
    if not isinstance(sub.parent, IntegralCone):
        raise UsageError("refine_model needs a subdivision of the model's cone")
    if not _polyhedra_equal(
        _as_polygon(sub.parent).constraints(),
        _as_polygon(model.cone).constraints(),
        model.m,
    ):
        raise UsageError("subdivision parent differs from the model's cone")
    charts = []
    for piece in sub.pieces:
        if not isinstance(piece, IntegralCone):
            raise UsageError("cone models need cone pieces")
        charts.append(CoordModel(model.n, piece))
    return RefinedModel(model, sub, tuple(charts))


def lift_point(refined: RefinedModel, point: CoordModelPoint) -> LiftedPoint:
    """The unique preimage, tagged with the least piece containing it."""
    a = point.tropical
    for idx, chart in enumerate(refined.charts):
        if chart.cone.contains(a):
            return LiftedPoint(idx, CoordModelPoint.of(chart, point.x, point.z))
    raise UsageError("point does not lie over the refined model")


def project_point(refined: RefinedModel, lifted: LiftedPoint) -> CoordModelPoint:
    return CoordModelPoint.of(refined.parent, lifted.point.x, lifted.point.z)


def pullback_refinement(f: MonomialMorphism, sub: Subdivision) -> Subdivision:
    """Coarsest source subdivision whose pieces map into pieces of `sub`."""
    report = validate_subdivision(sub)
    if not report.ok:
        raise ValidationError("; ".join(report.violations))
    if f.source is None:
        raise UsageError("pullback needs the morphism's source model")
    source_region: Region = f.source.cone
    m = f.source.m
    parent_cons = _as_polygon(source_region).constraints()
    parent_dim = _geom.affine_dim(parent_cons, m)
    const_exps = tuple(c.exp for c in f.consts)
    pieces: list[Region] = []
    for piece in sub.pieces:
        poly = _as_polygon(piece)
        pulled = []
        for con in poly.constraints_list:
            alpha_src = tuple(
                sum(con.alpha[r] * f.alpha[r][col] for r in range(len(f.alpha)))
                for col in range(m)
            )
            offset = con.c + sum(
                Fraction(a) * e for a, e in zip(con.alpha, const_exps)
            )
            pulled.append((offset, alpha_src, con.strict))
        preimage = ExplodedPolygon.of(m, pulled)
        combined = preimage.constraints() + parent_cons
        if _geom.affine_dim(combined, m) < parent_dim:
            continue
        pieces.append(_intersect_with_parent(source_region, preimage))
    return Subdivision(source_region, tuple(pieces))


def _intersect_with_parent(parent: Region, preimage: ExplodedPolygon) -> Region:
    if (
        isinstance(parent, IntegralCone)
        and all(c.c == 0 and not c.strict for c in preimage.constraints_list)
    ):
        rows = list(parent.ineqs)
        rows.extend(tuple(-x for x in c.alpha) for c in preimage.constraints_list)
        return IntegralCone(parent.m, tuple(rows))
    cons = list(_as_polygon(parent).constraints_list) + list(preimage.constraints_list)
    return ExplodedPolygon(parent.m, tuple(cons))


def subdivisions_equal(a: Subdivision, b: Subdivision) -> bool:
    """Same parent and the same pieces as point sets (any order)."""
    m = a.m
    if b.m != m:
        return False
    if not _polyhedra_equal(
        _as_polygon(a.parent).constraints(), _as_polygon(b.parent).constraints(), m
    ):
        return False
    remaining = [_as_polygon(p).constraints() for p in b.pieces]
    for piece in a.pieces:
        cons = _as_polygon(piece).constraints()
        for idx, other in enumerate(remaining):
            if _polyhedra_equal(cons, other, m):
                remaining.pop(idx)
                break
        else:
            return False
    return not remaining
