"""Command-line front end: JSON in, JSON out, SVG rendering.

Exit codes: 0 success, 1 validation/domain/usage/data errors (including
malformed JSON), 2 capability/computation errors.  Output is byte-stable:
keys sorted, no timestamps.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import annuli, coordmodel, gridio, jsonio, lattice, refinement, regularity
from . import svg as svgmod
from . import tropcurve
from .errors import (
    CapabilityError,
    DataError,
    DomainError,
    ExplodedKernelError,
    UsageError,
    ValidationError,
)
from .semiring import parse_expression


class _CliParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="exploded-kernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    def add(name: str, help_text: str, svg: bool = False, expr: bool = False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="in_path", metavar="PATH", help="input JSON file")
        p.add_argument("--json", dest="inline", metavar="JSON", help="inline input JSON")
        if expr:
            p.add_argument("--expr", metavar="EXPR", help="semiring expression")
        p.add_argument("--out", metavar="PATH", help="output path (default stdout)")
        if svg:
            p.add_argument("--svg", metavar="PATH", help="also render an SVG figure")
            p.add_argument(
                "--viewport",
                metavar="X0,Y0,X1,Y1",
                default="-5,-5,5,5",
                help="rational viewport box for SVG output",
            )
            p.add_argument(
                "--inset",
                action="store_true",
                help="draw the dual subdivision inset",
            )
        return p

    add("eval", "evaluate an exact exploded-semiring expression", expr=True)
    add("compare", "order two positive exploded values")
    add("eval-trop", "evaluate a tropical polynomial and its achieving set")
    add("dual-cone", "Hilbert basis and relations of the dual cone")
    add("faces", "strata of an integral cone")
    add("strata", "strata and local cones of a polygon")
    add("family-check", "lattice/real surjectivity test for a monomial morphism")
    add("fiber-mult", "fiber-product multiplicity and kernel cone")
    add("corner-locus", "weighted corner locus and dual subdivision", svg=True)
    add("balance-check", "verify the balancing condition of a weighted graph")
    add("prevariety", "intersection of corner loci (n <= 3)")
    add("refine", "refine a model along a subdivision")
    add("lift", "lift a point through a refinement")
    add("delta", "apply the weighted difference operator Delta_I")
    add("apply-e", "apply one strata substitution operator e_S")
    add("weights", "monomial weight generators w_I")
    add("seminorm", "weighted Hoelder seminorm estimates on a grid")
    add("modulus", "conformal modulus of a gluing parameter")
    add("concat-modulus", "concatenate conformal moduli")
    add("glue", "glue plus/minus maps over an annulus")
    add("cut", "cut an annulus map into plus/minus pieces")
    add("fit-cylinder", "fit the leading cylinder model to annulus samples")
    add("render", "render a balanced graph as SVG", svg=True)
    add("snf", "Smith normal form of an integer matrix")
    add("complete-check", "combinatorial completeness of a polygon complex")
    add("point-parts", "smooth and tropical parts of a model point")
    add("eval-fn", "evaluate an exploded monomial function at a point")
    add("tangent", "integral tangent lattice of a model")
    add("validate-subdivision", "cover and fan conditions for a subdivision")
    add("pullback", "pull a subdivision back along a monomial morphism")
    return parser


def _load_input(args) -> dict:
    sources = [s for s in (args.in_path, args.inline, getattr(args, "expr", None)) if s]
    if len(sources) != 1:
        raise UsageError("provide exactly one input source (--in, --json, or --expr)")
    if getattr(args, "expr", None):
        return {"expr": args.expr}
    raw = Path(args.in_path).read_text() if args.in_path else args.inline
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON input: {exc}") from None
    return jsonio.check_schema(doc)


def _emit(args, payload: dict) -> None:
    text = json.dumps(jsonio.document(payload), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_stratum(cone, sample_doc) -> lattice.Stratum:
    sample = [jsonio.unfrac(v) for v in sample_doc]
    for stratum in lattice.cone_faces(cone):
        tight = set()
        ok = True
        for i, row in enumerate(cone.ineqs):
            value = sum(Fraction(r) * s for r, s in zip(row, sample))
            if value < 0:
                ok = False
                break
            if value == 0:
                tight.add(i)
        if ok and frozenset(tight) == stratum.tight:
            return stratum
    raise DomainError("sample point does not lie in the cone")


def _symbolic_from_json(model, doc) -> regularity.SymbolicFunction:
    terms = [
        (tuple(int(p) for p in t["p"]), jsonio.parse_gaussian(str(t.get("c", "1"))))
        for t in doc["terms"]
    ]
    return regularity.SymbolicFunction.of(model.smooth_coordinate_count, terms)


def _symbolic_to_json(f: regularity.SymbolicFunction) -> dict:
    return {
        "nvars": f.nvars,
        "terms": [
            {"c": jsonio.format_gaussian(c), "p": list(p)} for p, c in f.terms
        ],
    }


def _samples_in(doc, key):
    if f"{key}_path" in doc:
        return gridio.read_grid(doc[f"{key}_path"])
    return jsonio.complex_samples_from_json(doc[key])


def _run(args) -> None:
    command = args.command
    doc = _load_input(args)

    if command == "eval":
        value = parse_expression(str(doc["expr"]))
        _emit(args, {"result": str(value), "value": jsonio.exploded_to_json(value)})

    elif command == "compare":
        from .rational import GaussianRational
        from .semiring import PositiveRealExploded, compare_positive

        def positive(entry):
            v = jsonio.exploded_from_json(entry)
            if isinstance(v.coeff, GaussianRational):
                if v.coeff.im != 0 or v.coeff.re <= 0:
                    raise DomainError("compare needs positive real coefficients")
                return PositiveRealExploded(v.coeff.re, v.exp)
            if v.coeff.imag != 0 or v.coeff.real <= 0:
                raise DomainError("compare needs positive real coefficients")
            return PositiveRealExploded(v.coeff.real, v.exp)

        order = compare_positive(positive(doc["a"]), positive(doc["b"]))
        _emit(args, {"order": {-1: "less", 0: "equal", 1: "greater"}[order]})

    elif command == "eval-trop":
        poly = jsonio.poly_from_json(doc["poly"])
        point = [jsonio.unfrac(v) for v in doc["a"]]
        value = tropcurve.eval_poly(poly, point)
        ach = tropcurve.achieving_set(poly, point)
        _emit(
            args,
            {
                "value": f"t^{jsonio.frac(value.exponent)}",
                "exponent": jsonio.frac(value.exponent),
                "achieving": [list(a) for a in ach.exponents],
            },
        )

    elif command == "dual-cone":
        hb = lattice.dual_cone_hilbert_basis(jsonio.cone_from_json(doc))
        _emit(args, jsonio.hilbert_to_json(hb))

    elif command == "faces":
        cone = jsonio.cone_from_json(doc)
        strata = lattice.cone_faces(cone)
        _emit(args, {"strata": [jsonio.stratum_to_json(s) for s in strata]})

    elif command == "strata":
        poly = jsonio.polygon_from_json(doc)
        strata = lattice.polygon_strata(poly)
        out = []
        for s in strata:
            entry = jsonio.stratum_to_json(s)
            entry["local_cone"] = jsonio.cone_to_json(lattice.local_cone_at(poly, s))
            out.append(entry)
        _emit(args, {"strata": out})

    elif command == "family-check":
        f = jsonio.morphism_from_json(doc)
        _emit(args, {"family": coordmodel.check_family_condition(f)})

    elif command == "fiber-mult":
        f = jsonio.morphism_from_json(doc)
        mult, kernel = coordmodel.fiber_multiplicity(f)
        _emit(
            args,
            {"multiplicity": mult, "kernel_cone": jsonio.cone_to_json(kernel)},
        )

    elif command == "corner-locus":
        locus = tropcurve.corner_locus(jsonio.poly_from_json(doc))
        _maybe_svg(args, locus.graph, locus.dual)
        _emit(args, jsonio.locus_to_json(locus))

    elif command == "balance-check":
        graph = jsonio.graph_from_json(doc)
        balanced, defects = tropcurve.check_balancing(graph)
        _emit(
            args,
            {
                "balanced": balanced,
                "defects": [[jsonio.frac(x) for x in row] for row in defects],
            },
        )

    elif command == "prevariety":
        polys = [jsonio.poly_from_json(p) for p in doc["polys"]]
        cells = tropcurve.prevariety(polys)
        _emit(
            args,
            {
                "dim": max((c.dim for c in cells), default=-1),
                "cells": [jsonio.cell_to_json(c) for c in cells],
            },
        )

    elif command == "refine":
        model = jsonio.model_from_json(doc["model"])
        sub = jsonio.subdivision_from_json(doc["subdivision"])
        refined = refinement.refine_model(model, sub)
        _emit(
            args,
            {
                "charts": [
                    {
                        "cone": jsonio.cone_to_json(chart.cone),
                        "dual_basis": jsonio.hilbert_to_json(chart.dual_basis),
                    }
                    for chart in refined.charts
                ]
            },
        )

    elif command == "lift":
        model = jsonio.model_from_json(doc["model"])
        sub = jsonio.subdivision_from_json(doc["subdivision"])
        refined = refinement.refine_model(model, sub)
        point = jsonio.point_from_json(model, doc["point"])
        lifted = refinement.lift_point(refined, point)
        _emit(
            args,
            {"piece": lifted.piece, "point": jsonio.point_to_json(lifted.point)},
        )

    elif command in ("delta", "apply-e"):
        model = jsonio.model_from_json(doc["model"])
        f = _symbolic_from_json(model, doc["function"])
        if command == "apply-e":
            stratum = _resolve_stratum(model.cone, doc["stratum"])
            result = regularity.apply_e_S(f, model, stratum)
        else:
            strata = tuple(
                _resolve_stratum(model.cone, s) for s in doc["strata"]
            )
            result = regularity.apply_delta_I(
                f, regularity.StrataSelector(model, strata)
            )
        _emit(args, {"function": _symbolic_to_json(result)})

    elif command == "weights":
        model = jsonio.model_from_json(doc["model"])
        strata = tuple(_resolve_stratum(model.cone, s) for s in doc["strata"])
        w = regularity.weight_w_I(model, regularity.StrataSelector(model, strata))
        _emit(
            args,
            {
                "coordinate_sets": [list(s) for s in w.coordinate_sets],
                "exponents": [list(e) for e in w.exponents],
                "generators": [list(g) for g in model.dual_basis.generators],
            },
        )

    elif command == "seminorm":
        model = jsonio.model_from_json(doc["model"])
        axes = [[jsonio.complex_from_json(v) for v in axis] for axis in doc["axes"]]
        values = _samples_in(doc, "values")
        f = regularity.SampledFunction(model, axes, values)
        report = regularity.seminorm_estimate(
            f, int(doc.get("k", 1)), jsonio.unfrac(doc["delta"])
        )
        strata = regularity.nonzero_strata(model)
        _emit(
            args,
            {
                "strata": [jsonio.stratum_to_json(s) for s in strata],
                "seminorms": {
                    ",".join(map(str, key)): value for key, value in report.items()
                },
            },
        )

    elif command == "modulus":
        q = annuli.GluingParameter(
            jsonio.exploded_from_json(doc["Q"]),
            float(doc["R"]) if "R" in doc else None,
        )
        _emit(args, jsonio.modulus_to_json(annuli.modulus_of_Q(q)))

    elif command == "concat-modulus":
        moduli = [jsonio.modulus_from_json(m) for m in doc["moduli"]]
        if not moduli:
            raise ValidationError("concatenation needs at least one modulus")
        total = moduli[0]
        for m in moduli[1:]:
            total = annuli.concat(total, m)
        _emit(args, jsonio.modulus_to_json(total))

    elif command == "cut":
        grid = jsonio.grid_from_json(doc["grid"])
        cutoffs = annuli.CutoffPair(float(doc["R"]))
        values = _samples_in(doc, "values")
        q = jsonio.complex_from_json(doc["Q"])
        plus, minus = annuli.cut(values, grid, q, cutoffs)
        _emit(
            args,
            {
                "plus": jsonio.samples_to_json(plus),
                "minus": jsonio.samples_to_json(minus),
            },
        )

    elif command == "glue":
        grid = jsonio.grid_from_json(doc["grid"])
        cutoffs = annuli.CutoffPair(float(doc["R"]))
        plus = _samples_in(doc, "plus")
        minus = _samples_in(doc, "minus")
        q = jsonio.complex_from_json(doc["Q"])
        glued = annuli.glue(plus, minus, grid, q, cutoffs)
        _emit(args, {"values": jsonio.samples_to_json(glued)})

    elif command == "fit-cylinder":
        grid = jsonio.grid_from_json(doc["grid"])
        values = _samples_in(doc, "complex_values")
        reals = (
            jsonio.real_samples_from_json(doc["real_values"])
            if "real_values" in doc
            else None
        )
        fit = annuli.fit_cylinder_model(
            grid, values, reals, float(doc["delta"]) if "delta" in doc else None
        )
        _emit(args, jsonio.cylinder_model_to_json(fit))

    elif command == "render":
        graph = jsonio.graph_from_json(doc["graph"] if "graph" in doc else doc)
        dual = jsonio.dual_from_json(doc["dual"]) if "dual" in doc else None
        text = svgmod.render_svg(
            graph, _viewport(args), dual, include_inset=args.inset
        )
        target = args.svg or args.out
        if target:
            Path(target).write_text(text)
        else:
            sys.stdout.write(text)

    elif command == "snf":
        U, D, V = lattice.smith_normal_form(doc["matrix"])
        _emit(args, {"U": U, "D": D, "V": V})

    elif command == "complete-check":
        cells = [jsonio.region_from_json(c) for c in doc["cells"]]
        _emit(args, {"complete": lattice.is_complete_complex(cells)})

    elif command == "point-parts":
        model = jsonio.model_from_json(doc["model"])
        point = jsonio.point_from_json(model, doc["point"])
        smooth, tropical = coordmodel.point_parts(model, point)
        _emit(
            args,
            {
                "generators": [list(g) for g in model.dual_basis.generators],
                "smooth": [_scalar_json(v) for v in smooth],
                "tropical": [jsonio.frac(x) for x in tropical],
            },
        )

    elif command == "eval-fn":
        model = jsonio.model_from_json(doc["model"])
        h = jsonio.function_from_json(model, doc["function"])
        point = jsonio.point_from_json(model, doc["point"])
        value = coordmodel.eval_function(model, h, point)
        _emit(args, {"result": str(value), "value": jsonio.exploded_to_json(value)})

    elif command == "tangent":
        model = jsonio.model_from_json(doc["model"] if "model" in doc else doc)
        latt = coordmodel.integral_tangent_basis(model)
        _emit(
            args,
            {
                "rank": latt.rank,
                "basis": [list(b) for b in latt.basis],
                "pairing": [list(row) for row in latt.pairing],
            },
        )

    elif command == "validate-subdivision":
        sub = jsonio.subdivision_from_json(doc["subdivision"] if "subdivision" in doc else doc)
        report = refinement.validate_subdivision(sub)
        _emit(args, {"valid": report.ok, "violations": list(report.violations)})

    elif command == "pullback":
        f = jsonio.morphism_from_json(doc["morphism"])
        sub = jsonio.subdivision_from_json(doc["subdivision"])
        pulled = refinement.pullback_refinement(f, sub)
        _emit(args, jsonio.subdivision_to_json(pulled))

    else:
        raise UsageError("missing subcommand; see --help")


def _scalar_json(value):
    from .rational import GaussianRational, format_gaussian

    if isinstance(value, GaussianRational):
        return format_gaussian(value)
    return jsonio.complex_to_json(value)


def _viewport(args):
    parts = str(args.viewport).split(",")
    if len(parts) != 4:
        raise UsageError("viewport must be four comma-separated rationals")
    return [jsonio.unfrac(p.strip()) for p in parts]


def _maybe_svg(args, graph, dual) -> None:
    if getattr(args, "svg", None):
        text = svgmod.render_svg(graph, _viewport(args), dual, include_inset=args.inset)
        Path(args.svg).write_text(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; see --help")
        _run(args)
        return 0
    except ExplodedKernelError as exc:
        error_doc = jsonio.document(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}
        )
        sys.stderr.write(json.dumps(error_doc, sort_keys=True) + "\n")
        return exc.exit_code
    except Exception as exc:  # internal failures report as computation errors
        error_doc = jsonio.document(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}
        )
        sys.stderr.write(json.dumps(error_doc, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
