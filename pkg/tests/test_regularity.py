"""Strata substitution, weighted differences, and seminorm estimates."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from exploded_kernel.coordmodel import CoordModel, standard_model
from exploded_kernel.errors import DataError, UsageError
from exploded_kernel.lattice import IntegralCone
from exploded_kernel.regularity import (
    SampledFunction,
    StrataSelector,
    SymbolicFunction,
    apply_delta_I,
    apply_e_S,
    killed_coordinates,
    model_strata,
    nonzero_strata,
    seminorm_estimate,
    weight_w_I,
)

T22 = standard_model(0, 2, 2)
GENS = T22.dual_basis.generators  # ((0, 1), (1, 0))
Z1 = GENS.index((1, 0))
Z2 = GENS.index((0, 1))


def stratum_killing(*coords):
    target = frozenset(coords)
    for s in nonzero_strata(T22):
        if killed_coordinates(T22, s) == target:
            return s
    raise AssertionError("no such stratum")


S1 = stratum_killing(Z1)  # e_{S1} f(z1, z2) = f(0, z2)
S2 = stratum_killing(Z2)
S_INT = stratum_killing(Z1, Z2)


def mono(p1, p2, coeff=1):
    powers = [0, 0]
    powers[Z1] = p1
    powers[Z2] = p2
    return SymbolicFunction.monomial(2, tuple(powers), coeff)


def test_e_S_paper_example():
    f = mono(1, 1)
    assert apply_e_S(f, T22, S1).terms == ()
    g = mono(0, 2, 3)
    assert apply_e_S(g, T22, S1) == g
    assert apply_e_S(g, T22, S2).terms == ()


def test_e_S_idempotent_and_commuting():
    rng_terms = [
        [(p, q, c) for p, q, c in [(1, 0, 2), (0, 3, 5), (2, 2, -1), (0, 0, 7)]]
    ][0]
    f = SymbolicFunction.of(
        2,
        [(_powers(p, q), c) for p, q, c in rng_terms],
    )
    for s in (S1, S2, S_INT):
        once = apply_e_S(f, T22, s)
        assert apply_e_S(once, T22, s) == once
    a = apply_e_S(apply_e_S(f, T22, S1), T22, S2)
    b = apply_e_S(apply_e_S(f, T22, S2), T22, S1)
    assert a == b


def _powers(p1, p2):
    powers = [0, 0]
    powers[Z1] = p1
    powers[Z2] = p2
    return tuple(powers)


def test_e_S_constant_fixed():
    c = mono(0, 0, 4)
    for s in (S1, S2, S_INT):
        assert apply_e_S(c, T22, s) == c


def test_e_S_zero_substratum_rejected():
    zero = [s for s in model_strata(T22) if s.is_zero_substratum][0]
    with pytest.raises(UsageError):
        apply_e_S(mono(1, 0), T22, zero)
    with pytest.raises(UsageError):
        StrataSelector(T22, (zero,))


def test_e_S_well_defined_on_interior_choices():
    # two distinct relative-interior points of the same stratum kill the
    # same coordinates, so the operator does not depend on the choice
    from exploded_kernel.lattice import Stratum

    for s in (S1, S2, S_INT):
        scaled = tuple(Fraction(7, 3) * x for x in s.sample)
        alt = Stratum(s.tight, scaled, s.dim, False)
        assert killed_coordinates(T22, alt) == killed_coordinates(T22, s)


def test_delta_examples():
    I = StrataSelector(T22, (S1, S2))
    f = mono(1, 1)
    assert apply_delta_I(f, I) == f
    assert apply_delta_I(mono(0, 0), I).terms == ()
    fsum = SymbolicFunction.of(2, [(_powers(1, 0), 1), (_powers(0, 1), 1)])
    assert apply_delta_I(fsum, I).terms == ()


def test_e_S_kills_delta():
    monomials = [mono(p, q) for p in range(3) for q in range(3)]
    for subset in itertools.combinations((S1, S2, S_INT), 2):
        I = StrataSelector(T22, subset)
        for f in monomials:
            diff = apply_delta_I(f, I)
            for s in subset:
                assert apply_e_S(diff, T22, s).terms == ()


def test_weight_examples():
    w1 = weight_w_I(T22, StrataSelector(T22, (S1,)))
    assert w1.coordinate_sets == ((Z1,),)
    assert w1.exponents == ((1, 0),)
    w12 = weight_w_I(T22, StrataSelector(T22, (S1, S2)))
    assert w12.coordinate_sets == (tuple(sorted((Z1, Z2))),)
    assert w12.exponents == ((1, 1),)
    wv = weight_w_I(T22, StrataSelector(T22, (S_INT,)))
    assert set(wv.coordinate_sets) == {(Z1,), (Z2,)}
    assert set(wv.exponents) == {(1, 0), (0, 1)}


def test_weight_generators_killed_by_selected_strata():
    for strata in [(S1,), (S2,), (S1, S2), (S_INT,), (S1, S_INT)]:
        selector = StrataSelector(T22, strata)
        w = weight_w_I(T22, selector)
        for coords in w.coordinate_sets:
            f = SymbolicFunction.monomial(
                2, tuple(1 if j in coords else 0 for j in range(2))
            )
            for s in strata:
                assert apply_e_S(f, T22, s).terms == ()


def grid(axis1, axis2, fn):
    return SampledFunction(T22, [axis1, axis2], evaluator=fn)


def _axis(vals):
    return [complex(v) for v in vals]


def test_delta_ratio_identity_on_grid():
    def f(w0, w1):
        return w0 * w1

    sf = grid(_axis(np.linspace(-1, 1, 7)), _axis(np.linspace(-2, 2, 5)), f)
    selector = StrataSelector(T22, (S1, S2))
    diff = apply_delta_I(sf, selector)
    weight = weight_w_I(T22, selector).evaluate(sf)
    mask = weight > 0
    assert np.allclose(np.abs(diff.values[mask]) / weight[mask], 1.0)


def test_constant_has_zero_seminorms():
    sf = grid(_axis([0, 0.5, 1]), _axis([0, 0.25, 1]), lambda a, b: 3.5 + 0j)
    report = seminorm_estimate(sf, 2, Fraction(1, 2))
    for key, value in report.items():
        if key:
            assert value == 0.0
        else:
            assert value == 3.5


def test_planted_hoelder_profile():
    # f = Re(z1) * |z2|^{1/2}; axis order follows the generators: axis Z2 is z2
    axes = [None, None]
    axes[Z1] = _axis(np.linspace(0.1, 1, 4))
    axes[Z2] = _axis(np.geomspace(1e-8, 1, 50))

    def f(w0, w1):
        z1 = (w0, w1)[Z1]
        z2 = (w0, w1)[Z2]
        return np.real(z1) * abs(z2) ** 0.5

    sf = SampledFunction(T22, axes, evaluator=f)
    sel = StrataSelector(T22, (S2,))
    diff = apply_delta_I(sf, sel)
    weight = weight_w_I(T22, sel).evaluate(sf)
    mask = weight > 0
    low = np.max(np.abs(diff.values[mask]) / weight[mask] ** 0.4)
    half = np.max(np.abs(diff.values[mask]) / weight[mask] ** 0.5)
    high = np.max(np.abs(diff.values[mask]) / weight[mask] ** 0.8)
    assert low <= 1.0 + 1e-12
    assert half <= 1.0 + 1e-12
    assert high > 100.0  # grid-divergent trend for delta above the exponent


def test_polynomial_ratio_bounded_on_compact_grid():
    def f(w0, w1):
        return 2 * w0**2 * w1 + w0 * w1 - 3 * w0 * w1**3

    sf = grid(_axis(np.linspace(-1, 1, 9)), _axis(np.linspace(-1, 1, 9)), f)
    for strata in [(S1,), (S2,), (S1, S2), (S_INT,)]:
        selector = StrataSelector(T22, strata)
        diff = apply_delta_I(sf, selector)
        weight = weight_w_I(T22, selector).evaluate(sf)
        mask = weight > 0
        ratios = np.abs(diff.values[mask]) / weight[mask]
        assert np.all(np.isfinite(ratios))
        assert ratios.max() < 50


def test_alternative_generators_comparable():
    # doubling a generating monomial changes the weight by a bounded factor
    sf = grid(_axis(np.linspace(0.05, 1, 8)), _axis(np.linspace(0.05, 1, 8)),
              lambda a, b: a * b)
    selector = StrataSelector(T22, (S1,))
    w = weight_w_I(T22, selector).evaluate(sf)
    mesh = np.meshgrid(*[np.array(a) for a in sf.axes], indexing="ij")
    w_alt = np.abs(mesh[Z1]) + np.abs(mesh[Z1] * mesh[Z2])  # redundant generator
    ratio = w_alt[w > 0] / w[w > 0]
    assert ratio.max() < 3 and ratio.min() > 0.5


def test_seminorm_report_keys():
    sf = grid(_axis([0, 1]), _axis([0, 1]), lambda a, b: a + b)
    report = seminorm_estimate(sf, 2, Fraction(1, 2))
    sizes = sorted(len(k) for k in report)
    assert sizes[0] == 0 and max(sizes) == 2


def test_missing_zero_sample_is_data_error():
    sf = SampledFunction(
        T22, [_axis([0.5, 1.0]), _axis([0, 1])], values=np.ones((2, 2))
    )
    with pytest.raises(DataError):
        sf.substitute_zero(frozenset([0]))


def test_product_grid_requires_relation_free_model():
    model = CoordModel(0, IntegralCone(2, ((0, 1), (2, -1))))
    with pytest.raises(UsageError):
        SampledFunction(model, [[0], [0], [0]], values=np.ones((1, 1, 1)))
