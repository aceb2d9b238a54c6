"""Strata substitution operators, weighted differences, and seminorms.

e_S substitutes 0 into every smooth coordinate whose pairing with the
stratum is positive; Delta_I is the inclusion-exclusion product of
(id - e_S).  On monomials Delta_I acts as the indicator of "killed by
every e_S", which makes the exact symbolic identities one-liners.  The
numeric path shares the same killed-coordinate sets and runs on grids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import _geom
from .coordmodel import CoordModel
from .errors import DataError, UsageError, ValidationError
from .lattice import Stratum, cone_faces
from .rational import GaussianRational


def model_strata(model: CoordModel) -> list[Stratum]:
    return cone_faces(model.cone)


def nonzero_strata(model: CoordModel) -> list[Stratum]:
    return [s for s in model_strata(model) if not s.is_zero_substratum]


def killed_coordinates(model: CoordModel, stratum: Stratum) -> frozenset[int]:
    """Indices of dual generators with positive pairing on the stratum."""
    if stratum.is_zero_substratum:
        raise UsageError("e_S is not defined on the zero substratum")
    killed = frozenset(
        j
        for j, alpha in enumerate(model.dual_basis.generators)
        if _geom.dot(alpha, stratum.sample) > 0
    )
    return killed


@dataclass(frozen=True)
class StrataSelector:
    model: CoordModel
    strata: tuple[Stratum, ...]

    def __post_init__(self):
        for s in self.strata:
            if s.is_zero_substratum:
                raise UsageError("selectors may not contain the zero substratum")

    def killed_sets(self) -> list[frozenset[int]]:
        return [killed_coordinates(self.model, s) for s in self.strata]


@dataclass(frozen=True)
class SymbolicFunction:
    """Exact linear combination of monomials in the smooth coordinates."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], GaussianRational], ...]

    @staticmethod
    def of(nvars: int, terms) -> "SymbolicFunction":
        canon: dict[tuple[int, ...], GaussianRational] = {}
        for powers, coeff in terms:
            powers = tuple(int(p) for p in powers)
            if len(powers) != nvars or any(p < 0 for p in powers):
                raise ValidationError("monomial powers must be nonnegative")
            coeff = GaussianRational.of(coeff)
            acc = canon.get(powers)
            canon[powers] = coeff if acc is None else acc + coeff
        return SymbolicFunction(
            nvars, tuple(sorted((p, c) for p, c in canon.items() if c))
        )

    @staticmethod
    def monomial(nvars: int, powers, coeff=1) -> "SymbolicFunction":
        return SymbolicFunction.of(nvars, [(powers, coeff)])

    def substitute_zero(self, killed: frozenset[int]) -> "SymbolicFunction":
        kept = [
            (powers, coeff)
            for powers, coeff in self.terms
            if all(powers[j] == 0 for j in killed)
        ]
        return SymbolicFunction(self.nvars, tuple(kept))

    def __eq__(self, other):
        return (
            isinstance(other, SymbolicFunction)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.terms))


class SampledFunction:
    """Complex samples over a product grid of smooth-coordinate values."""

    def __init__(
        self,
        model: CoordModel,
        axes: Sequence[Sequence[complex]],
        values: Optional[np.ndarray] = None,
        evaluator: Optional[Callable] = None,
    ):
        if model.dual_basis.relations:
            raise UsageError(
                "product grids are only valid on models without binomial relations"
            )
        k = model.smooth_coordinate_count
        if len(axes) != k:
            raise ValidationError("one axis per smooth coordinate required")
        self.model = model
        self.axes = tuple(tuple(complex(v) for v in axis) for axis in axes)
        self.evaluator = evaluator
        if values is None:
            if evaluator is None:
                raise ValidationError("provide sample values or an evaluator")
            values = self._evaluate_grid(evaluator)
        values = np.asarray(values, dtype=complex)
        if values.shape != tuple(len(a) for a in self.axes):
            raise ValidationError("value array shape does not match the grid")
        if not np.all(np.isfinite(values)):
            raise DataError("samples contain non-finite values")
        self.values = values

    def _evaluate_grid(self, evaluator: Callable) -> np.ndarray:
        mesh = np.meshgrid(*[np.array(a, dtype=complex) for a in self.axes], indexing="ij")
        out = np.vectorize(evaluator)(*mesh) if mesh else np.array(evaluator())
        return np.asarray(out, dtype=complex)

    def with_values(self, values: np.ndarray) -> "SampledFunction":
        return SampledFunction(self.model, self.axes, values, self.evaluator)

    def substitute_zero(self, killed: frozenset[int]) -> "SampledFunction":
        if not killed:
            return self
        if self.evaluator is not None:
            def zeroed(*coords):
                replaced = [
                    0j if j in killed else coords[j] for j in range(len(coords))
                ]
                return self.evaluator(*replaced)

            values = self._evaluate_grid(zeroed)
            return SampledFunction(self.model, self.axes, values, None)
        indexer: list = [slice(None)] * len(self.axes)
        values = self.values
        for j in killed:
            try:
                zero_idx = self.axes[j].index(0j)
            except ValueError:
                raise DataError(
                    f"axis {j} has no zero sample; cannot apply the substitution"
                ) from None
            taken = np.take(values, [zero_idx], axis=j)
            values = np.broadcast_to(taken, values.shape)
        return SampledFunction(self.model, self.axes, np.array(values), None)


def apply_e_S(f, model: CoordModel, stratum: Stratum):
    """Substitution operator for one stratum; same kind out as in."""
    killed = killed_coordinates(model, stratum)
    return f.substitute_zero(killed)


def apply_delta_I(f, selector: StrataSelector):
    """The inclusion-exclusion product of (id - e_S) over the selector."""
    if not selector.strata:
        raise UsageError("Delta needs a nonempty strata collection")
    killed_sets = selector.killed_sets()
    if isinstance(f, SymbolicFunction):
        kept = [
            (powers, coeff)
            for powers, coeff in f.terms
            if all(any(powers[j] > 0 for j in ks) for ks in killed_sets)
        ]
        return SymbolicFunction(f.nvars, tuple(kept))
    total = np.zeros_like(f.values)
    for subset_size in range(len(killed_sets) + 1):
        for subset in itertools.combinations(range(len(killed_sets)), subset_size):
            union: frozenset[int] = frozenset().union(
                *(killed_sets[i] for i in subset)
            ) if subset else frozenset()
            term = f.substitute_zero(union).values
            total = total + ((-1) ** subset_size) * term
    return f.with_values(total)


@dataclass(frozen=True)
class WeightFunction:
    """w_I = sum over generators of |product of killed smooth coordinates|."""

    coordinate_sets: tuple[tuple[int, ...], ...]
    exponents: tuple[tuple[int, ...], ...]  # generators as elements of A*

    def evaluate(self, f: SampledFunction) -> np.ndarray:
        mesh = np.meshgrid(
            *[np.array(a, dtype=complex) for a in f.axes], indexing="ij"
        )
        total = np.zeros(f.values.shape, dtype=float)
        for coords in self.coordinate_sets:
            prod = np.ones(f.values.shape, dtype=float)
            for j in coords:
                prod = prod * np.abs(mesh[j])
            total = total + prod
        return total


def weight_w_I(model: CoordModel, selector: StrataSelector) -> WeightFunction:
    """Minimal monomial generators of the ideal killed by every e_S, S in I."""
    killed_sets = selector.killed_sets()
    if any(not ks for ks in killed_sets):
        raise UsageError("a selected stratum kills no coordinate")
    k = model.smooth_coordinate_count
    hitting: list[tuple[int, ...]] = []
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            chosen = set(subset)
            if not all(chosen & ks for ks in killed_sets):
                continue
            if any(set(h) <= chosen for h in hitting):
                continue
            hitting.append(subset)
    generators = []
    for subset in hitting:
        alpha = tuple(
            sum(model.dual_basis.generators[j][i] for j in subset)
            for i in range(model.m)
        )
        generators.append(alpha)
    return WeightFunction(tuple(hitting), tuple(generators))


def seminorm_estimate(
    f: SampledFunction, k: int, delta: Fraction
) -> dict[tuple[int, ...], float]:
    """sup |w_I^{-delta} Delta_I f| over the grid, per collection I of <= k strata.

    Grid points where w_I vanishes are excluded; Delta_I f vanishes there
    for functions in the sampled smooth class.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValidationError("delta must lie in (0, 1]")
    strata = nonzero_strata(f.model)
    report: dict[tuple[int, ...], float] = {
        (): float(np.max(np.abs(f.values))) if f.values.size else 0.0
    }
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(len(strata)), size):
            selector = StrataSelector(f.model, tuple(strata[i] for i in combo))
            diff = apply_delta_I(f, selector)
            weight = weight_w_I(f.model, selector).evaluate(f)
            mask = weight > 0
            if not np.any(mask):
                report[combo] = 0.0
                continue
            ratios = np.abs(diff.values[mask]) / (weight[mask] ** float(delta))
            report[combo] = float(np.max(ratios))
    return report
