"""Points and monomial morphisms of coordinate models R^n x T^m_A.

The smooth part of a model is cut out by the dual-basis coordinates
z^{alpha^j}; smooth factors of exploded functions are restricted to a
closed rational-expression language so evaluation stays exact and
serializable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _geom
from .errors import DomainError, UsageError, ValidationError
from .lattice import (
    HilbertBasis,
    IntegralCone,
    cone_generators,
    dual_cone_hilbert_basis,
    invariant_factors,
)
from .rational import GaussianRational
from .semiring import EXACT, ExplodedNumber, iota


@dataclass(frozen=True)
class Polynomial:
    """Multivariate polynomial with exact coefficients, dense-term form."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], GaussianRational], ...]

    @staticmethod
    def of(nvars: int, terms) -> "Polynomial":
        canon: dict[tuple[int, ...], GaussianRational] = {}
        for powers, coeff in terms:
            powers = tuple(int(p) for p in powers)
            if len(powers) != nvars or any(p < 0 for p in powers):
                raise ValidationError("polynomial powers must be nonnegative, arity-matched")
            coeff = GaussianRational.of(coeff)
            acc = canon.get(powers)
            canon[powers] = coeff if acc is None else acc + coeff
        cleaned = tuple(sorted((p, c) for p, c in canon.items() if c))
        return Polynomial(nvars, cleaned)

    @staticmethod
    def constant(nvars: int, value) -> "Polynomial":
        return Polynomial.of(nvars, [((0,) * nvars, value)])

    def __call__(self, values: Sequence):
        exact = all(isinstance(v, (GaussianRational, int, Fraction)) for v in values)
        total = GaussianRational() if exact else 0j
        for powers, coeff in self.terms:
            term = coeff if exact else complex(coeff)
            for v, p in zip(values, powers):
                if p:
                    term = term * (GaussianRational.of(v) ** p if exact else complex(v) ** p)
            total = total + term
        return total


@dataclass(frozen=True)
class RationalExpr:
    """Quotient of polynomials; the denominator must not vanish at use sites."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def of(num: Polynomial, den: Optional[Polynomial] = None) -> "RationalExpr":
        if den is None:
            den = Polynomial.constant(num.nvars, 1)
        if num.nvars != den.nvars:
            raise ValidationError("numerator/denominator arity mismatch")
        return RationalExpr(num, den)

    def __call__(self, values: Sequence):
        d = self.den(values)
        if not d:
            raise DomainError("smooth factor denominator vanishes at the point")
        return self.num(values) / d


class CoordModel:
    """Model R^n x T^m_A with cached dual Hilbert basis coordinates."""

    def __init__(self, n: int, cone: IntegralCone):
        if n < 0:
            raise ValidationError("real dimension must be nonnegative")
        self.n = n
        self.cone = cone
        self._dual: Optional[HilbertBasis] = None

    @property
    def m(self) -> int:
        return self.cone.m

    @property
    def dual_basis(self) -> HilbertBasis:
        if self._dual is None:
            self._dual = dual_cone_hilbert_basis(self.cone)
        return self._dual

    @property
    def smooth_coordinate_count(self) -> int:
        return len(self.dual_basis.generators)

    def __repr__(self):
        return f"CoordModel(n={self.n}, cone={self.cone.ineqs})"


def standard_model(n: int, m: int, positive: int) -> CoordModel:
    """R^n x T^m_k: first `positive` tropical coordinates constrained >= 0."""
    rows = tuple(
        tuple(int(i == j) for j in range(m)) for i in range(positive)
    )
    return CoordModel(n, IntegralCone(m, rows))


@dataclass(frozen=True)
class CoordModelPoint:
    x: tuple[Fraction, ...]
    z: tuple[ExplodedNumber, ...]

    @staticmethod
    def of(model: CoordModel, x: Sequence, z: Sequence[ExplodedNumber]) -> "CoordModelPoint":
        xs = tuple(Fraction(v) for v in x)
        zs = tuple(z)
        if len(xs) != model.n or len(zs) != model.m:
            raise ValidationError("point arity does not match the model")
        for value in zs:
            value.require_function_value()
        exponents = tuple(value.exp for value in zs)
        if not model.cone.contains(exponents):
            raise DomainError("tropical part of the point lies outside the cone")
        return CoordModelPoint(xs, zs)

    @property
    def tropical(self) -> tuple[Fraction, ...]:
        return tuple(value.exp for value in self.z)


def point_parts(model: CoordModel, point: CoordModelPoint):
    """Smooth coordinates over the dual generators, plus the tropical vector."""
    exponents = point.tropical
    if not model.cone.contains(exponents):
        raise DomainError("point is not in the model's cone")
    smooth = []
    for alpha in model.dual_basis.generators:
        pairing = sum(Fraction(a) * e for a, e in zip(alpha, exponents))
        if pairing == 0:
            value = None
            for coeff, power in zip((z.coeff for z in point.z), alpha):
                if power == 0:
                    continue
                factor = coeff**power
                value = factor if value is None else value * factor
            if value is None:
                value = GaussianRational.of(1) if _exact_point(point) else 1 + 0j
            smooth.append(value)
        else:
            smooth.append(GaussianRational() if _exact_point(point) else 0j)
    return tuple(smooth), exponents


def _exact_point(point: CoordModelPoint) -> bool:
    return all(z.backend == EXACT for z in point.z)


@dataclass(frozen=True)
class ExplodedMonomialFunction:
    """f(smooth part) * t^y * z^alpha with nonvanishing smooth factor f."""

    smooth: RationalExpr
    y: Fraction
    alpha: tuple[int, ...]

    @staticmethod
    def of(model: CoordModel, smooth: Optional[RationalExpr], y, alpha) -> "ExplodedMonomialFunction":
        nvars = model.n + model.smooth_coordinate_count
        if smooth is None:
            smooth = RationalExpr.of(Polynomial.constant(nvars, 1))
        if smooth.num.nvars != nvars:
            raise ValidationError(
                "smooth factor arity must equal n + number of dual generators"
            )
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != model.m:
            raise ValidationError("monomial exponent arity mismatch")
        return ExplodedMonomialFunction(smooth, Fraction(y), alpha)


def eval_function(
    model: CoordModel, h: ExplodedMonomialFunction, point: CoordModelPoint
) -> ExplodedNumber:
    smooth_coords, _ = point_parts(model, point)
    factor = h.smooth(tuple(point.x) + tuple(smooth_coords))
    if not factor:
        raise DomainError("smooth factor vanishes: value would leave C*t^R")
    backend = point.z[0].backend if point.z else EXACT
    value = iota(factor, backend) * ExplodedNumber(
        GaussianRational.of(1) if backend == EXACT else 1 + 0j, h.y
    )
    for z, power in zip(point.z, h.alpha):
        if power:
            value = value * z**power
    return value.require_function_value()


@dataclass(frozen=True)
class AffineMap:
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    @staticmethod
    def identity(n: int) -> "AffineMap":
        return AffineMap(
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)),
            tuple(Fraction(0) for _ in range(n)),
        )

    @staticmethod
    def of(matrix, offset=None) -> "AffineMap":
        rows = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        if offset is None:
            offset = [0] * len(rows)
        return AffineMap(rows, tuple(Fraction(x) for x in offset))

    @property
    def target_dim(self) -> int:
        return len(self.matrix)

    @property
    def source_dim(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __call__(self, x: Sequence[Fraction]):
        return tuple(
            sum(a * Fraction(v) for a, v in zip(row, x)) + b
            for row, b in zip(self.matrix, self.offset)
        )

    def linear_rank(self) -> int:
        return _geom.rank(self.matrix) if self.matrix else 0


@dataclass(frozen=True)
class MonomialMorphism:
    """Lattice-plus-constant map: target z_j = const_j * prod_i z_i^{alpha[j][i]}."""

    alpha: tuple[tuple[int, ...], ...]
    consts: tuple[ExplodedNumber, ...]
    real: AffineMap
    source: Optional[CoordModel] = None
    target: Optional[CoordModel] = None

    @staticmethod
    def of(
        alpha,
        consts=None,
        real: Optional[AffineMap] = None,
        source: Optional[CoordModel] = None,
        target: Optional[CoordModel] = None,
    ) -> "MonomialMorphism":
        rows = tuple(tuple(int(a) for a in row) for row in alpha)
        if consts is None:
            consts = [iota(1) for _ in rows]
        consts = tuple(consts)
        if len(consts) != len(rows):
            raise ValidationError("one constant multiplier per target coordinate")
        for c in consts:
            c.require_function_value()
        if real is None:
            n = source.n if source is not None else 0
            real = AffineMap.identity(n)
        morphism = MonomialMorphism(rows, consts, real, source, target)
        if source is not None and target is not None:
            _check_tropical_image(morphism)
        return morphism

    @property
    def target_m(self) -> int:
        return len(self.alpha)

    @property
    def source_m(self) -> int:
        return len(self.alpha[0]) if self.alpha else 0

    def tropical_map(self, a: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            sum(Fraction(r) * Fraction(v) for r, v in zip(row, a)) + c.exp
            for row, c in zip(self.alpha, self.consts)
        )

    def apply(self, point: CoordModelPoint) -> CoordModelPoint:
        if self.source is None or self.target is None:
            raise UsageError("morphism application needs source and target models")
        z_new = []
        for row, const in zip(self.alpha, self.consts):
            value = const
            for z, power in zip(point.z, row):
                if power:
                    value = value * z**power
            z_new.append(value)
        return CoordModelPoint.of(self.target, self.real(point.x), z_new)

    def compose(self, inner: "MonomialMorphism") -> "MonomialMorphism":
        """self after inner."""
        rows = tuple(
            tuple(
                sum(r * s for r, s in zip(row, col))
                for col in zip(*inner.alpha)
            )
            if inner.alpha
            else ()
            for row in self.alpha
        )
        consts = []
        for row, c in zip(self.alpha, self.consts):
            value = c
            for inner_c, power in zip(inner.consts, row):
                if power:
                    value = value * inner_c**power
            consts.append(value)
        matrix = [
            [
                sum(a * b for a, b in zip(row, col))
                for col in zip(*inner.real.matrix)
            ]
            if inner.real.matrix
            else []
            for row in self.real.matrix
        ]
        offset = self.real(inner.real.offset) if self.real.matrix else ()
        real = AffineMap.of(matrix, offset)
        return MonomialMorphism(rows, tuple(consts), real, inner.source, self.target)


def _check_tropical_image(f: MonomialMorphism):
    target_cone = f.target.cone
    origin_image = f.tropical_map([Fraction(0)] * f.source_m)
    if not target_cone.contains(origin_image):
        raise ValidationError("tropical image of the origin misses the target cone")
    for gen in cone_generators(f.source.cone):
        direction = tuple(
            sum(Fraction(r) * g for r, g in zip(row, gen)) for row in f.alpha
        )
        if not target_cone.contains(direction):
            raise ValidationError(
                "tropical image of the source cone leaves the target cone"
            )


def check_family_condition(f: MonomialMorphism) -> bool:
    """Lattice surjectivity of the exponent matrix plus real surjectivity."""
    n_target = f.target_m
    if n_target:
        if f.source_m < n_target:
            return False
        factors = invariant_factors([list(row) for row in f.alpha])
        if len(factors) < n_target or any(d != 1 for d in factors[:n_target]):
            return False
    if f.real.matrix:
        if f.real.linear_rank() != f.real.target_dim:
            return False
    return True


def _int_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    mat = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if mat[i][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for i in range(col + 1, n):
            if mat[i][col] != 0:
                factor = mat[i][col] * inv
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[col])]
    assert det.denominator == 1
    return det.numerator


def fiber_multiplicity(f: MonomialMorphism):
    """Component count |alpha| of the unit fiber, with the kernel cone."""
    n = f.target_m
    m = f.source_m
    if _geom.rank(f.alpha) != n:
        raise DomainError("exponent matrix is not surjective over the reals")
    from math import gcd

    g = 0
    for cols in itertools.combinations(range(m), n):
        minor = _int_det([[f.alpha[i][j] for j in cols] for i in range(n)])
        g = gcd(g, abs(minor))
    source_cone = f.source.cone if f.source is not None else IntegralCone(m, ())
    rows = list(source_cone.ineqs)
    for row in f.alpha:
        rows.append(tuple(row))
        rows.append(tuple(-x for x in row))
    kernel_cone = IntegralCone(m, tuple(rows))
    return g, kernel_cone


@dataclass(frozen=True)
class IntegralTangentLattice:
    """The lattice of integral tangent vectors in standard coordinates."""

    rank: int
    basis: tuple[tuple[int, ...], ...]
    pairing: tuple[tuple[int, ...], ...]  # basis_i applied to coordinate z_j over z_j


def integral_tangent_basis(model: CoordModel) -> IntegralTangentLattice:
    m = model.m
    basis = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    pairing = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    return IntegralTangentLattice(rank=m, basis=basis, pairing=pairing)
