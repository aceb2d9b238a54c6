"""Conformal moduli, cutoffs, cut/glue maps, and cylinder fits."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from exploded_kernel.annuli import (
    ConformalModulus,
    CutoffPair,
    CylinderGrid,
    GluingParameter,
    concat,
    cut,
    fit_cylinder_model,
    glue,
    glue_maps,
    modulus_of_Q,
)
from exploded_kernel.errors import DataError, DomainError, ResolutionError
from exploded_kernel.semiring import ExplodedNumber


def test_modulus_of_Q_examples():
    m = modulus_of_Q(GluingParameter(ExplodedNumber(complex(math.exp(-5)), 0)))
    assert m.tropical_length == 0 and abs(m.log_part - 5.0) < 1e-12
    m = modulus_of_Q(GluingParameter(ExplodedNumber(1.0 + 0j, 2)))
    assert m.tropical_length == 2 and abs(m.log_part) < 1e-12
    m = modulus_of_Q(GluingParameter(ExplodedNumber(0.5 + 0j, 1)))
    assert m.tropical_length == 1 and abs(m.log_part - math.log(2)) < 1e-12


def test_gluing_parameter_domain_errors():
    with pytest.raises(DomainError):
        GluingParameter(ExplodedNumber(2.0 + 0j, 0))
    with pytest.raises(DomainError):
        GluingParameter(ExplodedNumber(1.0 + 0j, -1))
    with pytest.raises(DomainError):
        GluingParameter(ExplodedNumber(complex(math.exp(-3)), 0), R=5.0)
    GluingParameter(ExplodedNumber(complex(math.exp(-12)), 0), R=5.0)


def test_concat_examples():
    a = concat(ConformalModulus.finite(0, 3), ConformalModulus.finite(0, 4))
    assert a.tropical_length == 0 and a.log_part == 7.0
    b = concat(ConformalModulus.finite(1, 0.0001), ConformalModulus.finite(0, 5))
    assert b.tropical_length == 1 and abs(b.log_part - 5.0001) < 1e-12
    assert concat(ConformalModulus.finite(0, 1), ConformalModulus.semi()).semi_infinite


def test_concat_associative_commutative():
    rng = random.Random(6)
    for _ in range(100):
        vals = [
            ConformalModulus.finite(Fraction(rng.randint(0, 5)), rng.random() + 0.1)
            for _ in range(3)
        ]
        a, b, c = vals
        lhs = concat(concat(a, b), c)
        rhs = concat(a, concat(b, c))
        assert lhs.tropical_length == rhs.tropical_length
        assert abs(lhs.log_part - rhs.log_part) < 1e-12
        ab, ba = concat(a, b), concat(b, a)
        assert ab.tropical_length == ba.tropical_length
        assert ab.log_part == ba.log_part


def test_modulus_validation():
    with pytest.raises(DomainError):
        ConformalModulus.finite(0, 0.0)
    with pytest.raises(DomainError):
        ConformalModulus.finite(-1, 2.0)


def test_cutoff_plateaus_and_symmetry():
    co = CutoffPair(5.0)
    assert co.rho(math.exp(-0.95 * 5)) == 1.0
    assert co.rho(math.exp(-0.91 * 5)) == 1.0
    assert co.rho(math.exp(-0.79 * 5)) == 0.0
    assert co.beta(math.exp(0.2 * 5)) == 1.0
    assert co.beta(math.exp(-0.2 * 5)) == 0.0
    for logx in np.linspace(-2, 2, 41):
        bp, bm = co.beta_pair(logx)
        assert bp + bm == 1.0
        assert abs(co.beta(math.exp(logx)) + co.beta(math.exp(-logx)) - 1.0) < 1e-12
    mids = co.rho(np.exp(np.linspace(-0.89 * 5, -0.81 * 5, 9)))
    assert np.all(np.diff(mids) <= 0)


R = 5.0
Q = complex(math.exp(-12))


def _setup(n=64):
    cutoffs = CutoffPair(R)
    grid = CylinderGrid.cut_region(abs(Q), n, n)
    return cutoffs, grid, grid.points()


def test_cut_constant_decomposes():
    cutoffs, grid, zp = _setup()
    v = 2.5 - 1.25j
    phi = np.full((1, *zp.shape), v)
    plus, minus = cut(phi, grid, Q, cutoffs)
    assert np.max(np.abs(plus + minus - v)) < 1e-12


def test_cut_respects_plateau_support():
    cutoffs, grid, zp = _setup()
    phi = np.stack([zp])
    plus, minus = cut(phi, grid, Q, cutoffs)
    big = np.abs(zp) ** 2 / abs(Q) > math.exp(R / 10)
    assert np.array_equal(plus[0][big], phi[0][big])
    assert np.all(minus[0][big] == 0)


def test_cut_planted_pointwise():
    cutoffs, grid, zp = _setup()
    phi = np.stack([zp])
    plus, minus = cut(phi, grid, Q, cutoffs)
    expected_plus = cutoffs.beta(np.abs(zp) ** 2 / abs(Q)) * zp
    zm = Q / zp
    expected_minus = cutoffs.beta(np.abs(zm) ** 2 / abs(Q)) * zp
    assert np.max(np.abs(plus[0] - expected_plus)) < 1e-12
    assert np.max(np.abs(minus[0] - expected_minus)) < 1e-12


def test_cut_coverage_error():
    cutoffs = CutoffPair(R)
    grid = CylinderGrid(tuple(np.linspace(-3.0, 0.0, 16)), 16)
    phi = np.zeros((1, 16, 16))
    with pytest.raises(DataError):
        cut(phi, grid, Q, cutoffs)


def test_glue_cut_round_trip():
    cutoffs, grid, zp = _setup()
    phi = np.stack([zp + 0.25 * zp**3, np.exp(zp) - 1.0])
    plus, minus = cut(phi, grid, Q, cutoffs)
    glued = glue(plus, minus, grid, Q, cutoffs)
    assert np.max(np.abs(glued - phi)) <= 1e-12


def test_glue_zero_and_formula():
    cutoffs, grid, zp = _setup()
    zero = np.zeros((1, *zp.shape), dtype=complex)
    assert np.all(glue(zero, zero, grid, Q, cutoffs) == 0)
    plus = np.stack([zp])
    glued = glue(plus, zero, grid, Q, cutoffs)
    expected = cutoffs.rho(np.abs(Q / zp)) * zp
    assert np.max(np.abs(glued[0] - expected)) < 1e-12


def test_glue_precondition():
    cutoffs = CutoffPair(R)
    big_q = complex(math.exp(-2))
    grid = CylinderGrid.cut_region(abs(big_q), 16, 16)
    vals = np.zeros((1, 16, 16))
    with pytest.raises(DomainError):
        glue(vals, vals, grid, big_q, cutoffs)


def test_glue_linearity():
    cutoffs, grid, zp = _setup(32)
    rng = np.random.default_rng(5)
    shape = (2, *zp.shape)
    phi_p = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    phi_m = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    psi_p = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    psi_m = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    a = 1.7 - 0.3j
    lhs = glue(a * phi_p + psi_p, a * phi_m + psi_m, grid, Q, cutoffs)
    rhs = a * glue(phi_p, phi_m, grid, Q, cutoffs) + glue(psi_p, psi_m, grid, Q, cutoffs)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_glue_maps_callable():
    cutoffs = CutoffPair(R)
    g = glue_maps(lambda zp: zp, lambda zm: 0.0 * zm, cutoffs)
    zp = 0.5 * np.exp(0.3j)
    zm = Q / zp
    assert abs(g(zp, zm) - cutoffs.rho(abs(zm)) * zp) < 1e-14


def test_fit_exact_monomial():
    grid = CylinderGrid.annulus(6.0, 48, 128)
    pts = grid.points()
    fit = fit_cylinder_model(grid, np.stack([5.0 * pts**3]))
    assert fit.alpha == (3,)
    assert abs(fit.c[0] - 5.0) < 1e-12
    assert fit.sup_residual < 1e-12
    assert fit.a == (Fraction(0),)


def test_fit_with_real_factors():
    grid = CylinderGrid.annulus(4.0, 32, 64)
    pts = grid.points()
    reals = np.full((2, *pts.shape), 0.0)
    reals[0] += 1.5
    reals[1] -= 2.5
    fit = fit_cylinder_model(grid, np.stack([2.0 * pts**-2]), reals)
    assert fit.alpha == (-2,)
    assert fit.reals == (1.5, -2.5)


def test_fit_decaying_perturbation_example():
    grid = CylinderGrid.annulus(6.0, 48, 192)
    pts = grid.points()
    fit = fit_cylinder_model(grid, np.stack([2.0 * pts**-1 * np.exp(0.1 * pts)]))
    assert fit.alpha == (-1,)
    assert abs(fit.c[0]) == pytest.approx(2.0, rel=1e-2)
    # residual profile decays toward the |z| -> 0 side
    t = np.asarray(grid.t)
    ratio = pts ** 1 * np.stack([2.0 * pts**-1 * np.exp(0.1 * pts)])[0] / fit.c[0]
    resid = np.hypot(np.log(np.abs(ratio)), np.angle(ratio)).max(axis=1)
    inner = resid[t < -2].max()
    outer = resid[t > 2].max()
    assert inner < outer / 50


def test_fit_planted_delta_profiles():
    grid = CylinderGrid.annulus(8.0, 64, 256)
    pts = grid.points()
    t = np.log(np.abs(pts))
    theta = np.angle(pts)
    rng = np.random.default_rng(42)
    for delta in (0.3, 0.5, 0.8):
        profile = math.exp(-delta * 8.0) * (np.exp(delta * t) + np.exp(-delta * t))
        h = profile * np.exp(1j * (theta + rng.uniform(0, 2 * np.pi)))
        c = 1.5 * np.exp(0.4j)
        fit = fit_cylinder_model(grid, np.stack([c * pts**2 * np.exp(h)]))
        assert fit.alpha == (2,)
        assert abs(fit.delta_hat - delta) <= 0.1


def test_fit_rejects_zero_samples():
    grid = CylinderGrid.annulus(3.0, 8, 16)
    vals = np.stack([grid.points()])
    vals[0, 0, 0] = 0
    with pytest.raises(DataError):
        fit_cylinder_model(grid, vals)


def test_fit_ambiguous_winding():
    grid = CylinderGrid.annulus(3.0, 8, 8)
    pts = grid.points()
    with pytest.raises(ResolutionError):
        fit_cylinder_model(grid, np.stack([pts**4]))
