"""Exploded annuli: moduli, gluing parameters, cut/glue maps, cylinder fits.

A modulus is stored as (tropical length l, log part s), linearizing the
multiplicative x*t^{-l} notation; the semi-infinite annulus is a distinct
variant that absorbs under concatenation.  Cutoffs are quintic
smoothsteps in log|x| over the required plateaus, so the plateau values
are exact and the complementary pair beta(x), beta(1/x) sums to 1 by
construction where it matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, DomainError, ResolutionError, ValidationError
from .semiring import ExplodedNumber, magnitude


@dataclass(frozen=True)
class ConformalModulus:
    """Modulus of an exploded annulus: value s at tropical length l."""

    tropical_length: Fraction
    log_part: float
    semi_infinite: bool = False

    def __post_init__(self):
        if self.semi_infinite:
            return
        l = Fraction(self.tropical_length)
        object.__setattr__(self, "tropical_length", l)
        if l < 0:
            raise DomainError("tropical length must be nonnegative")
        if l == 0 and not self.log_part > 0:
            raise DomainError("a genuine annulus needs positive modulus at length 0")

    @staticmethod
    def finite(l, s) -> "ConformalModulus":
        return ConformalModulus(Fraction(l), float(s))

    @staticmethod
    def semi() -> "ConformalModulus":
        return ConformalModulus(Fraction(0), 0.0, semi_infinite=True)


def concat(m1: ConformalModulus, m2: ConformalModulus) -> ConformalModulus:
    """Nested annuli concatenate additively; semi-infinite absorbs."""
    if m1.semi_infinite or m2.semi_infinite:
        return ConformalModulus.semi()
    return ConformalModulus(
        m1.tropical_length + m2.tropical_length, m1.log_part + m2.log_part
    )


@dataclass(frozen=True)
class GluingParameter:
    """Value Q with z+z- = Q; chart context requires |Q| < e^{-2R}."""

    Q: ExplodedNumber
    R: Optional[float] = None

    def __post_init__(self):
        if self.Q.exp < 0:
            raise DomainError("gluing parameters have nonnegative order")
        if self.Q.exp == 0 and not magnitude(self.Q) < 1:
            raise DomainError("|Q| must be < 1 at tropical order 0")
        if self.R is not None and self.Q.exp == 0:
            if not magnitude(self.Q) < math.exp(-2 * self.R):
                raise DomainError("chart requires |Q| < e^{-2R}")


def modulus_of_Q(param: GluingParameter) -> ConformalModulus:
    """-log Q read componentwise: (l, s) = (order, -log|coefficient|)."""
    coeff = magnitude(param.Q)
    if coeff == 0:
        raise DomainError("gluing parameter has zero coefficient")
    return ConformalModulus(param.Q.exp, -math.log(coeff))


def _smoothstep5(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u))


@dataclass(frozen=True)
class CutoffPair:
    """rho and beta with the plateau/symmetry contract for chart scale R."""

    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValidationError("cutoff scale R must be positive")

    def rho(self, x):
        """1 for x <= e^{-9R/10}, 0 for x >= e^{-8R/10}, smooth monotone between."""
        logx = np.log(np.asarray(x, dtype=float))
        u = (logx + 0.9 * self.R) / (0.1 * self.R)
        return 1.0 - _smoothstep5(u)

    def beta_from_log(self, logx):
        """beta as a function of log x; 0 below -R/10, 1 above R/10."""
        u = (np.asarray(logx, dtype=float) + 0.1 * self.R) / (0.2 * self.R)
        return _smoothstep5(u)

    def beta(self, x):
        return self.beta_from_log(np.log(np.asarray(x, dtype=float)))

    def beta_pair(self, logx):
        """(beta(x), beta(1/x)) from one log argument; sums to 1 exactly."""
        b = self.beta_from_log(logx)
        return b, 1.0 - b


@dataclass(frozen=True)
class CylinderGrid:
    """Circles at radii e^t with n_angles equally spaced samples."""

    t: tuple[float, ...]
    n_angles: int

    @staticmethod
    def annulus(R: float, n_circles: int, n_angles: int) -> "CylinderGrid":
        ts = np.linspace(-(R + 1.0), R + 1.0, n_circles)
        return CylinderGrid(tuple(float(v) for v in ts), n_angles)

    @staticmethod
    def cut_region(q_abs: float, n_circles: int, n_angles: int) -> "CylinderGrid":
        ts = np.linspace(math.log(q_abs), 0.0, n_circles)
        return CylinderGrid(tuple(float(v) for v in ts), n_angles)

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_angles) / self.n_angles

    def points(self) -> np.ndarray:
        t = np.asarray(self.t)[:, None]
        return np.exp(t + 1j * self.thetas[None, :])


def _check_coverage(grid: CylinderGrid, q_abs: float):
    lo, hi = min(grid.t), max(grid.t)
    span = math.log(q_abs)
    if lo > span + 1e-9 or hi < -1e-9:
        raise DataError("samples do not cover the annulus between |Q| and 1")


def cut(values: np.ndarray, grid: CylinderGrid, q: complex, cutoffs: CutoffPair):
    """Split a map on {z+ z- = Q} into plus/minus pieces via beta.

    `values` has shape (d, len(t), n_angles), sampled at z+ = e^{t+i theta}.
    Both outputs stay aligned with the input grid; the minus piece holds
    phi-(z-) evaluated at z- = Q / z+.
    """
    q_abs = abs(q)
    if q_abs == 0:
        raise DomainError("cutting needs Q in C*")
    values = np.asarray(values, dtype=complex)
    if values.ndim != 3 or values.shape[1:] != (len(grid.t), grid.n_angles):
        raise ValidationError("values must have shape (d, circles, angles)")
    _check_coverage(grid, q_abs)
    t = np.asarray(grid.t)[None, :, None]
    log_ratio = 2.0 * t - math.log(q_abs)  # log(|z+|^2 / |Q|)
    beta_plus, beta_minus = cutoffs.beta_pair(log_ratio)
    return beta_plus * values, beta_minus * values


def glue(
    plus: np.ndarray,
    minus: np.ndarray,
    grid: CylinderGrid,
    q: complex,
    cutoffs: CutoffPair,
):
    """G = rho(|z-|) phi+ + rho(|z+|) phi- restricted to {z+ z- = Q}.

    Inputs are aligned on the z+ grid as produced by `cut`.  The identity
    glue(cut(phi)) = phi needs |Q| <= e^{-2R}.
    """
    q_abs = abs(q)
    if not q_abs <= math.exp(-2.0 * cutoffs.R):
        raise DomainError("gluing identity requires |Q| <= e^{-2R}")
    plus = np.asarray(plus, dtype=complex)
    minus = np.asarray(minus, dtype=complex)
    t = np.asarray(grid.t)[None, :, None]
    abs_plus = np.exp(t)
    abs_minus = q_abs / np.exp(t)
    return cutoffs.rho(abs_minus) * plus + cutoffs.rho(abs_plus) * minus


def glue_maps(phi_plus, phi_minus, cutoffs: CutoffPair):
    """Gluing of callables into a map on pairs (z+, z-); linear in the inputs."""

    def glued(z_plus, z_minus):
        return cutoffs.rho(np.abs(z_minus)) * phi_plus(z_plus) + cutoffs.rho(
            np.abs(z_plus)
        ) * phi_minus(z_minus)

    return glued


@dataclass(frozen=True)
class CylinderModel:
    """Leading monomial model F(z) = (c_j z^{alpha_j} t^{a_j}, ..., reals)."""

    alpha: tuple[int, ...]
    c: tuple[complex, ...]
    a: tuple[Fraction, ...]
    reals: tuple[float, ...]
    delta_hat: float
    sup_residual: float


def _winding_and_mean(circle: np.ndarray):
    """Winding number and log-mean of one closed circle of samples."""
    phases = np.angle(circle)
    closed = np.append(phases, phases[0])
    jumps = np.diff(closed)
    jumps = np.angle(np.exp(1j * jumps))
    if np.any(np.abs(jumps) >= np.pi - 1e-12):
        raise ResolutionError(
            "adjacent-sample phase jump >= pi; increase angular sampling"
        )
    total = float(np.sum(jumps))
    winding = round(total / (2.0 * np.pi))
    if abs(total / (2.0 * np.pi) - winding) > 1e-6:
        raise ResolutionError("winding count did not close up to an integer")
    return winding


def fit_cylinder_model(
    grid: CylinderGrid,
    complex_values: np.ndarray,
    real_values: Optional[np.ndarray] = None,
    delta: Optional[float] = None,
) -> CylinderModel:
    """Recover winding numbers, leading coefficients, and the decay exponent.

    Windings come from phase accumulation on the circle nearest |z| = 1;
    coefficients from the geometric mean of f(z)/z^alpha there; delta-hat
    from a log-linear regression of circle-wise sup residuals against
    distance from the center, restricted to the outer half where the
    profile is genuinely log-linear.
    """
    complex_values = np.asarray(complex_values, dtype=complex)
    if complex_values.ndim != 3 or complex_values.shape[1:] != (
        len(grid.t),
        grid.n_angles,
    ):
        raise ValidationError("complex values must have shape (k, circles, angles)")
    if np.any(complex_values == 0):
        raise DataError("C* factor samples must be nowhere zero")
    reals = (
        np.asarray(real_values, dtype=float)
        if real_values is not None
        else np.zeros((0, len(grid.t), grid.n_angles))
    )
    t = np.asarray(grid.t)
    center = int(np.argmin(np.abs(t)))
    points = grid.points()

    alphas = []
    coeffs = []
    for j in range(complex_values.shape[0]):
        winding = _winding_and_mean(complex_values[j, center, :])
        alphas.append(winding)
        g = complex_values[j, center, :] / points[center, :] ** winding
        log_mag = np.mean(np.log(np.abs(g)))
        phases = np.angle(g)
        closed = np.append(phases, phases[0])
        jumps = np.angle(np.exp(1j * np.diff(closed)))[:-1]
        args = phases[0] + np.concatenate(([0.0], np.cumsum(jumps)))
        coeffs.append(complex(np.exp(log_mag + 1j * np.mean(args))))
    real_consts = [float(np.mean(reals[i, center, :])) for i in range(reals.shape[0])]

    model_c = np.array(coeffs)[:, None, None]
    model_alpha = np.array(alphas)[:, None, None]
    ratio = complex_values / (model_c * points[None, :, :] ** model_alpha)
    # cylindrical-metric residual |h| where f = F e^h, principal branch
    residual = np.hypot(np.log(np.abs(ratio)), np.angle(ratio))
    if reals.shape[0]:
        model_real = np.array(real_consts)[:, None, None]
        residual = np.concatenate([residual, np.abs(reals - model_real)], axis=0)
    per_circle = residual.max(axis=(0, 2))

    R = max(abs(t.min()), abs(t.max())) - 1.0
    inner = np.abs(t) <= R + 1e-9
    sup_residual = float(per_circle[inner].max()) if np.any(inner) else float(
        per_circle.max()
    )

    # sided log-linear fits: the profile e^{-dR}(e^{dt} + e^{-dt}) is only
    # log-linear in |t| away from the center, and may be one-sided
    slopes = []
    for side in (t >= R / 2.0, t <= -R / 2.0):
        window = side & (per_circle > 1e-300)
        if np.count_nonzero(window) >= 2 and per_circle[window].max() > 1e-14:
            slopes.append(
                float(np.polyfit(np.abs(t[window]), np.log(per_circle[window]), 1)[0])
            )
    delta_hat = max(slopes) if slopes else 0.0
    return CylinderModel(
        alpha=tuple(alphas),
        c=tuple(coeffs),
        a=tuple(Fraction(0) for _ in alphas),
        reals=tuple(real_consts),
        delta_hat=delta_hat,
        sup_residual=sup_residual,
    )
