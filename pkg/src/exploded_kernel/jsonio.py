"""JSON encoding for every public type, versioned as exploded-kernel/1.

Exact rationals travel as decimal-free fraction strings; exact complex
coefficients as canonical strings like "1/2-3i"; float-backend complex
numbers as [re, im] pairs.  Documents carry a top-level schema field and
forward-incompatible inputs are rejected.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from .annuli import ConformalModulus, CylinderGrid, CylinderModel, GluingParameter
from .coordmodel import (
    AffineMap,
    CoordModel,
    CoordModelPoint,
    ExplodedMonomialFunction,
    MonomialMorphism,
    Polynomial,
    RationalExpr,
)
from .errors import ValidationError
from .lattice import (
    ExplodedPolygon,
    HilbertBasis,
    IntegralCone,
    Stratum,
)
from .rational import (
    GaussianRational,
    format_fraction,
    format_gaussian,
    parse_fraction,
    parse_gaussian,
)
from .refinement import Subdivision
from .semiring import EXACT, ExplodedNumber
from .tropcurve import (
    BalancedGraph,
    CornerLocus,
    DualCell,
    DualEdgeRecord,
    DualSubdivision,
    GraphEdge,
    GraphRay,
    PolyhedralCell,
    TropicalPolynomial,
)

SCHEMA = "exploded-kernel/1"


def check_schema(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise ValidationError("input document must be a JSON object")
    schema = doc.get("schema")
    if schema is not None and schema != SCHEMA:
        raise ValidationError(f"unsupported schema {schema!r}; expected {SCHEMA!r}")
    return doc


def document(payload: dict) -> dict:
    return {"schema": SCHEMA, **payload}


# --- scalars -----------------------------------------------------------------


def frac(x) -> str:
    return format_fraction(Fraction(x))


def unfrac(x) -> Fraction:
    if isinstance(x, (int, str)):
        return parse_fraction(x)
    raise ValidationError(f"expected a fraction string, got {type(x).__name__}")


def exploded_to_json(value: ExplodedNumber) -> dict:
    if value.backend == EXACT:
        c = format_gaussian(value.coeff)
    else:
        c = [value.coeff.real, value.coeff.imag]
    return {"c": c, "e": frac(value.exp)}


def exploded_from_json(doc) -> ExplodedNumber:
    if not isinstance(doc, dict) or "c" not in doc or "e" not in doc:
        raise ValidationError("exploded numbers need fields 'c' and 'e'")
    c = doc["c"]
    if isinstance(c, str):
        coeff = parse_gaussian(c)
    elif isinstance(c, (list, tuple)) and len(c) == 2:
        coeff = complex(float(c[0]), float(c[1]))
    elif isinstance(c, int):
        coeff = GaussianRational.of(c)
    elif isinstance(c, float):
        coeff = complex(c)
    else:
        raise ValidationError("coefficient must be an exact string or [re, im]")
    return ExplodedNumber(coeff, unfrac(doc["e"]))


def complex_to_json(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def complex_from_json(doc) -> complex:
    if isinstance(doc, (int, float)):
        return complex(doc)
    if isinstance(doc, (list, tuple)) and len(doc) == 2:
        return complex(float(doc[0]), float(doc[1]))
    raise ValidationError("expected [re, im]")


# --- regions -----------------------------------------------------------------


def cone_to_json(cone: IntegralCone) -> dict:
    return {"m": cone.m, "ineqs": [list(row) for row in cone.ineqs]}


def cone_from_json(doc) -> IntegralCone:
    if not isinstance(doc, dict) or "m" not in doc or "ineqs" not in doc:
        raise ValidationError("cones need fields 'm' and 'ineqs'")
    return IntegralCone(int(doc["m"]), tuple(tuple(int(x) for x in row) for row in doc["ineqs"]))


def polygon_to_json(poly: ExplodedPolygon) -> dict:
    return {
        "m": poly.m,
        "constraints": [
            {"c": frac(con.c), "alpha": list(con.alpha), "strict": con.strict}
            for con in poly.constraints_list
        ],
    }


def polygon_from_json(doc) -> ExplodedPolygon:
    if not isinstance(doc, dict) or "m" not in doc or "constraints" not in doc:
        raise ValidationError("polygons need fields 'm' and 'constraints'")
    cons = [
        (unfrac(entry["c"]), tuple(int(x) for x in entry["alpha"]), bool(entry.get("strict", False)))
        for entry in doc["constraints"]
    ]
    return ExplodedPolygon.of(int(doc["m"]), cons)


def region_to_json(region) -> dict:
    if isinstance(region, IntegralCone):
        return cone_to_json(region)
    return polygon_to_json(region)


def region_from_json(doc):
    if isinstance(doc, dict) and "ineqs" in doc:
        return cone_from_json(doc)
    return polygon_from_json(doc)


def stratum_to_json(s: Stratum) -> dict:
    return {
        "tight": sorted(s.tight),
        "sample": [frac(x) for x in s.sample],
        "dim": s.dim,
        "zero_substratum": s.is_zero_substratum,
    }


def hilbert_to_json(hb: HilbertBasis) -> dict:
    return {
        "generators": [list(g) for g in hb.generators],
        "relations": [list(r) for r in hb.relations],
    }


def subdivision_to_json(sub: Subdivision) -> dict:
    return {
        "parent": region_to_json(sub.parent),
        "pieces": [region_to_json(p) for p in sub.pieces],
    }


def subdivision_from_json(doc) -> Subdivision:
    if not isinstance(doc, dict) or "parent" not in doc or "pieces" not in doc:
        raise ValidationError("subdivisions need fields 'parent' and 'pieces'")
    return Subdivision(
        region_from_json(doc["parent"]),
        tuple(region_from_json(p) for p in doc["pieces"]),
    )


# --- models, points, morphisms ----------------------------------------------


def model_to_json(model: CoordModel) -> dict:
    return {"n": model.n, "cone": cone_to_json(model.cone)}


def model_from_json(doc) -> CoordModel:
    if not isinstance(doc, dict) or "cone" not in doc:
        raise ValidationError("models need fields 'n' and 'cone'")
    return CoordModel(int(doc.get("n", 0)), cone_from_json(doc["cone"]))


def point_to_json(point: CoordModelPoint) -> dict:
    return {
        "x": [frac(v) for v in point.x],
        "z": [exploded_to_json(z) for z in point.z],
    }


def point_from_json(model: CoordModel, doc) -> CoordModelPoint:
    if not isinstance(doc, dict) or "z" not in doc:
        raise ValidationError("points need fields 'x' and 'z'")
    return CoordModelPoint.of(
        model,
        [unfrac(v) for v in doc.get("x", [])],
        [exploded_from_json(z) for z in doc["z"]],
    )


def morphism_to_json(f: MonomialMorphism) -> dict:
    doc = {
        "alpha": [list(row) for row in f.alpha],
        "consts": [exploded_to_json(c) for c in f.consts],
        "real": {
            "matrix": [[frac(x) for x in row] for row in f.real.matrix],
            "offset": [frac(x) for x in f.real.offset],
        },
    }
    if f.source is not None:
        doc["source"] = model_to_json(f.source)
    if f.target is not None:
        doc["target"] = model_to_json(f.target)
    return doc


def morphism_from_json(doc) -> MonomialMorphism:
    if not isinstance(doc, dict) or "alpha" not in doc:
        raise ValidationError("morphisms need an 'alpha' exponent matrix")
    alpha = tuple(tuple(int(x) for x in row) for row in doc["alpha"])
    consts = (
        [exploded_from_json(c) for c in doc["consts"]] if "consts" in doc else None
    )
    real = None
    if "real" in doc:
        real_doc = doc["real"]
        real = AffineMap.of(
            [[unfrac(x) for x in row] for row in real_doc.get("matrix", [])],
            [unfrac(x) for x in real_doc.get("offset", [])] or None,
        )
    source = model_from_json(doc["source"]) if "source" in doc else None
    target = model_from_json(doc["target"]) if "target" in doc else None
    return MonomialMorphism.of(alpha, consts, real, source, target)


def polynomial_expr_to_json(expr: RationalExpr) -> dict:
    def poly(p: Polynomial):
        return [
            {"c": format_gaussian(coeff), "p": list(powers)} for powers, coeff in p.terms
        ]

    return {"nvars": expr.num.nvars, "num": poly(expr.num), "den": poly(expr.den)}


def polynomial_expr_from_json(doc) -> RationalExpr:
    nvars = int(doc["nvars"])

    def poly(entries) -> Polynomial:
        return Polynomial.of(
            nvars, [(tuple(e["p"]), parse_gaussian(str(e["c"]))) for e in entries]
        )

    num = poly(doc["num"])
    den = poly(doc["den"]) if doc.get("den") else None
    return RationalExpr.of(num, den)


def function_to_json(h: ExplodedMonomialFunction) -> dict:
    return {
        "smooth": polynomial_expr_to_json(h.smooth),
        "y": frac(h.y),
        "alpha": list(h.alpha),
    }


def function_from_json(model: CoordModel, doc) -> ExplodedMonomialFunction:
    smooth = polynomial_expr_from_json(doc["smooth"]) if "smooth" in doc else None
    return ExplodedMonomialFunction.of(
        model, smooth, unfrac(doc.get("y", "0")), doc["alpha"]
    )


# --- tropical curves ----------------------------------------------------------


def poly_to_json(poly: TropicalPolynomial) -> dict:
    return {
        "n": poly.n,
        "terms": [{"y": frac(y), "alpha": list(alpha)} for y, alpha in poly.terms],
    }


def poly_from_json(doc) -> TropicalPolynomial:
    if not isinstance(doc, dict) or "n" not in doc or "terms" not in doc:
        raise ValidationError("polynomials need fields 'n' and 'terms'")
    return TropicalPolynomial.of(
        int(doc["n"]),
        [(unfrac(t["y"]), tuple(int(a) for a in t["alpha"])) for t in doc["terms"]],
    )


def graph_to_json(graph: BalancedGraph) -> dict:
    return {
        "n": graph.n,
        "vertices": [[frac(x) for x in v] for v in graph.vertices],
        "edges": [
            {"u": e.u, "v": e.v, "dir": list(e.direction), "weight": e.weight}
            for e in graph.edges
        ],
        "rays": [
            {"v": r.v, "dir": list(r.direction), "weight": r.weight}
            for r in graph.rays
        ],
    }


def graph_from_json(doc) -> BalancedGraph:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ValidationError("graphs need vertices/edges/rays")
    return BalancedGraph(
        int(doc.get("n", 2)),
        tuple(tuple(unfrac(x) for x in v) for v in doc["vertices"]),
        tuple(
            GraphEdge(int(e["u"]), int(e["v"]), tuple(int(x) for x in e["dir"]), int(e["weight"]))
            for e in doc.get("edges", [])
        ),
        tuple(
            GraphRay(int(r["v"]), tuple(int(x) for x in r["dir"]), int(r["weight"]))
            for r in doc.get("rays", [])
        ),
    )


def dual_to_json(dual: DualSubdivision) -> dict:
    return {
        "newton_hull": [list(p) for p in dual.newton_hull],
        "newton_area2": dual.newton_area2,
        "cells": [
            {
                "vertex": c.vertex,
                "exponents": [list(e) for e in c.exponents],
                "hull": [list(p) for p in c.hull],
                "area2": c.area2,
            }
            for c in dual.cells
        ],
        "edges": [
            {
                "endpoints": [list(e.endpoints[0]), list(e.endpoints[1])],
                "kind": e.kind,
                "locus_index": e.locus_index,
            }
            for e in dual.edges
        ],
    }


def dual_from_json(doc) -> DualSubdivision:
    return DualSubdivision(
        tuple(tuple(int(x) for x in p) for p in doc.get("newton_hull", [])),
        int(doc.get("newton_area2", 0)),
        tuple(
            DualCell(
                int(c["vertex"]),
                tuple(tuple(int(x) for x in e) for e in c["exponents"]),
                tuple(tuple(int(x) for x in p) for p in c["hull"]),
                int(c["area2"]),
            )
            for c in doc.get("cells", [])
        ),
        tuple(
            DualEdgeRecord(
                (
                    tuple(int(x) for x in e["endpoints"][0]),
                    tuple(int(x) for x in e["endpoints"][1]),
                ),
                str(e["kind"]),
                int(e["locus_index"]),
            )
            for e in doc.get("edges", [])
        ),
    )


def locus_to_json(locus: CornerLocus) -> dict:
    return {"graph": graph_to_json(locus.graph), "dual": dual_to_json(locus.dual)}


def cell_to_json(cell: PolyhedralCell) -> dict:
    return {
        "dim": cell.dim,
        "sample": [frac(x) for x in cell.sample],
        "constraints": [
            {"alpha": list(alpha), "c": frac(c)} for alpha, c in cell.constraints
        ],
    }


# --- annuli -------------------------------------------------------------------


def modulus_to_json(m: ConformalModulus) -> dict:
    if m.semi_infinite:
        return {"semi_infinite": True}
    return {"l": frac(m.tropical_length), "s": m.log_part}


def modulus_from_json(doc) -> ConformalModulus:
    if not isinstance(doc, dict):
        raise ValidationError("moduli are JSON objects")
    if doc.get("semi_infinite"):
        return ConformalModulus.semi()
    return ConformalModulus(unfrac(doc["l"]), float(doc["s"]))


def grid_to_json(grid: CylinderGrid) -> dict:
    return {"t": list(grid.t), "n_angles": grid.n_angles}


def grid_from_json(doc) -> CylinderGrid:
    if not isinstance(doc, dict) or "t" not in doc or "n_angles" not in doc:
        raise ValidationError("grids need fields 't' and 'n_angles'")
    return CylinderGrid(tuple(float(v) for v in doc["t"]), int(doc["n_angles"]))


def samples_to_json(values: np.ndarray) -> list:
    values = np.asarray(values)
    if values.dtype.kind == "c":
        stacked = np.stack([values.real, values.imag], axis=-1)
        return stacked.tolist()
    return values.tolist()


def complex_samples_from_json(doc) -> np.ndarray:
    arr = np.asarray(doc, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValidationError("complex samples need a trailing [re, im] axis")
    return arr[..., 0] + 1j * arr[..., 1]


def real_samples_from_json(doc) -> np.ndarray:
    return np.asarray(doc, dtype=float)


def cylinder_model_to_json(fit: CylinderModel) -> dict:
    return {
        "alpha": list(fit.alpha),
        "c": [complex_to_json(c) for c in fit.c],
        "a": [frac(a) for a in fit.a],
        "reals": list(fit.reals),
        "delta_hat": fit.delta_hat,
        "sup_residual": fit.sup_residual,
    }
