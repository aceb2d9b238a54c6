"""Deterministic SVG rendering of planar balanced graphs.

Edges are line elements, rays are clipped exactly to the viewport in
rational arithmetic before formatting, weights > 1 get text labels, and
an optional inset draws the dual Newton subdivision.  No timestamps or
generated ids, so identical inputs give identical bytes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapabilityError, ValidationError
from .tropcurve import BalancedGraph, DualSubdivision

_CANVAS = 420.0
_MARGIN = 10.0


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def _clip_ray(origin, direction, box):
    """Largest t >= 0 with origin + t*direction inside the box, exactly."""
    xmin, ymin, xmax, ymax = box
    t_max: Optional[Fraction] = None
    for coord, lo, hi in ((0, xmin, xmax), (1, ymin, ymax)):
        d = Fraction(direction[coord])
        o = Fraction(origin[coord])
        if d == 0:
            if not lo <= o <= hi:
                return None
            continue
        t_lo = (lo - o) / d
        t_hi = (hi - o) / d
        t_far = max(t_lo, t_hi)
        if t_far < 0:
            return None
        t_max = t_far if t_max is None else min(t_max, t_far)
    return t_max


class _Mapper:
    def __init__(self, box):
        self.box = box
        xmin, ymin, xmax, ymax = box
        self.scale = (_CANVAS - 2 * _MARGIN) / float(max(xmax - xmin, ymax - ymin))
        self.xmin = float(xmin)
        self.ymax = float(ymax)

    def to_px(self, p) -> tuple[float, float]:
        x = _MARGIN + (float(p[0]) - self.xmin) * self.scale
        y = _MARGIN + (self.ymax - float(p[1])) * self.scale
        return x, y


def render_svg(
    graph: BalancedGraph,
    viewport: Sequence = (-5, -5, 5, 5),
    dual: Optional[DualSubdivision] = None,
    include_inset: bool = False,
) -> str:
    if graph.n != 2:
        raise CapabilityError("SVG rendering is only defined for planar graphs")
    box = tuple(Fraction(v) for v in viewport)
    if len(box) != 4 or box[0] >= box[2] or box[1] >= box[3]:
        raise ValidationError("viewport must be xmin,ymin,xmax,ymax with positive size")
    mapper = _Mapper(box)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS:.0f}" '
        f'height="{_CANVAS:.0f}" viewBox="0 0 {_CANVAS:.0f} {_CANVAS:.0f}">',
        f'<rect x="0" y="0" width="{_CANVAS:.0f}" height="{_CANVAS:.0f}" '
        'fill="white" stroke="none"/>',
    ]
    labels = []
    for edge in graph.edges:
        p = mapper.to_px(graph.vertices[edge.u])
        q = mapper.to_px(graph.vertices[edge.v])
        parts.append(
            f'<line x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" x2="{_fmt(q[0])}" '
            f'y2="{_fmt(q[1])}" stroke="black" stroke-width="1.5"/>'
        )
        if edge.weight > 1:
            labels.append(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2, edge.weight))
    for ray in graph.rays:
        origin = graph.vertices[ray.v]
        t = _clip_ray(origin, ray.direction, box)
        if t is None or t == 0:
            continue
        end = tuple(Fraction(o) + t * d for o, d in zip(origin, ray.direction))
        p = mapper.to_px(origin)
        q = mapper.to_px(end)
        parts.append(
            f'<line x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" x2="{_fmt(q[0])}" '
            f'y2="{_fmt(q[1])}" stroke="black" stroke-width="1.5"/>'
        )
        if ray.weight > 1:
            labels.append(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2, ray.weight))
    for vertex in graph.vertices:
        p = mapper.to_px(vertex)
        parts.append(
            f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="3" fill="black"/>'
        )
    for x, y, weight in labels:
        parts.append(
            f'<text x="{_fmt(x + 4)}" y="{_fmt(y - 4)}" font-size="12" '
            f'font-family="monospace" fill="black">{weight}</text>'
        )
    if include_inset and dual is not None and dual.newton_hull:
        parts.extend(_inset(dual))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _inset(dual: DualSubdivision) -> list[str]:
    side = 110.0
    x0 = _CANVAS - side - 6.0
    y0 = 6.0
    xs = [p[0] for p in dual.newton_hull]
    ys = [p[1] for p in dual.newton_hull]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    scale = (side - 16.0) / float(span)

    def to_px(p):
        return (
            x0 + 8.0 + (float(p[0]) - min(xs)) * scale,
            y0 + side - 8.0 - (float(p[1]) - min(ys)) * scale,
        )

    parts = [
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(side)}" '
        f'height="{_fmt(side)}" fill="none" stroke="gray" stroke-width="0.75"/>'
    ]
    hulls = [c.hull for c in dual.cells] or [dual.newton_hull]
    for hull in hulls:
        pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in map(to_px, hull))
        parts.append(
            f'<polygon points="{pts}" fill="none" stroke="gray" stroke-width="0.75"/>'
        )
    return parts
