"""Computational kernel for exploded torus fibrations.

Modules: semiring (tropical/exploded arithmetic), lattice (cones,
polygons, Hilbert bases, Smith form), coordmodel (points and monomial
morphisms of coordinate models), tropcurve (corner loci and balancing),
refinement (subdivisions and point lifts), regularity (e_S, Delta_I, w_I
and seminorms), annuli (moduli, gluing, cylinder fits), cli (JSON/SVG
front end).
"""

from .annuli import (
    ConformalModulus,
    CutoffPair,
    CylinderGrid,
    CylinderModel,
    GluingParameter,
    concat,
    cut,
    fit_cylinder_model,
    glue,
    glue_maps,
    modulus_of_Q,
)
from .coordmodel import (
    AffineMap,
    CoordModel,
    CoordModelPoint,
    ExplodedMonomialFunction,
    IntegralTangentLattice,
    MonomialMorphism,
    Polynomial,
    RationalExpr,
    check_family_condition,
    eval_function,
    fiber_multiplicity,
    integral_tangent_basis,
    point_parts,
    standard_model,
)
from .errors import (
    CapabilityError,
    ComputationError,
    DataError,
    DomainError,
    ExplodedKernelError,
    ResolutionError,
    UsageError,
    ValidationError,
)
from .lattice import (
    ExplodedPolygon,
    HilbertBasis,
    IntegralCone,
    PolygonConstraint,
    Stratum,
    cone_faces,
    dual_cone_hilbert_basis,
    invariant_factors,
    is_complete_complex,
    local_cone_at,
    polygon_strata,
    smith_normal_form,
)
from .rational import GaussianRational
from .refinement import (
    LiftedPoint,
    RefinedModel,
    Subdivision,
    SubdivisionReport,
    lift_point,
    project_point,
    pullback_refinement,
    refine_model,
    subdivisions_equal,
    validate_subdivision,
)
from .regularity import (
    SampledFunction,
    StrataSelector,
    SymbolicFunction,
    WeightFunction,
    apply_delta_I,
    apply_e_S,
    killed_coordinates,
    nonzero_strata,
    seminorm_estimate,
    weight_w_I,
)
from .semiring import (
    ExplodedNumber,
    PositiveRealExploded,
    TropicalNumber,
    compare_positive,
    expl_add,
    expl_mul,
    iota,
    parse_expression,
    smooth_part,
    tropical_part,
)
from .svg import render_svg
from .tropcurve import (
    AchievingSet,
    BalancedGraph,
    CornerLocus,
    GraphEdge,
    GraphRay,
    TropicalPolynomial,
    achieving_set,
    check_balancing,
    corner_locus,
    eval_poly,
    prevariety,
)

__version__ = "0.1.0"
