"""Reduction of the constant-scalar-curvature condition on a warped circle.

A product metric dt^2 + f(t)^2 h on S^1 x N, where the fiber (N, h) has
dimension n - 1 >= 2 and constant scalar curvature R > 0, has constant
scalar curvature Rt > 0 exactly when the positive warp f satisfies

    Rt f^2 + 2 (n-1) f f'' + (n-1)(n-2) f'^2 - R = 0.

The substitution f = x^(2/n) removes the first-derivative square and turns
this into a conservative oscillator for x > 0,

    x'' + force(x) = 0,
    force(x) = (n Rt / (4 (n-1))) x - (n R / (4 (n-1))) x^(1 - 4/n),

whose potential is normalized to vanish as x -> 0+.  The unique positive
rest point x_star is a nondegenerate center; orbits with energy strictly
between the well bottom and zero are closed, and each closed orbit maps
back to a positive periodic warp.  Everything downstream (period maps,
profile solving, bifurcation counts) is built on the few evaluators here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ModelParams",
    "DerivedConstants",
    "PhaseState",
    "derive_constants",
    "force",
    "potential",
    "potential_above_min",
    "energy",
    "linearized_frequency",
    "to_warp_coords",
    "curvature_residual",
]


@dataclass(frozen=True)
class ModelParams:
    """Dimension and curvature data of the warped product.

    n is the total dimension (fiber dimension n - 1), R the fiber scalar
    curvature, Rt the target scalar curvature of the product.  Both
    curvatures must be positive; nothing here covers the flat or negative
    cases.
    """

    n: int
    R: float
    Rt: float

    def __post_init__(self) -> None:
        n = self.n
        if isinstance(n, float):
            if not n.is_integer():
                raise DomainError(f"dimension n must be an integer, got {n}")
            n = int(n)
        if not isinstance(n, int) or isinstance(n, bool) or n < 3:
            raise DomainError(f"dimension n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "n", n)
        for name in ("R", "Rt"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be a positive finite number, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class PhaseState:
    """A point (t, x, v) on the reduced phase cylinder, x > 0."""

    t: float
    x: float
    v: float

    def __post_init__(self) -> None:
        for name in ("t", "x", "v"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.x <= 0.0:
            raise DomainError(f"reduced variable must stay positive, got x = {self.x}")


@dataclass(frozen=True)
class DerivedConstants:
    """Closed-form constants attached to one parameter set.

    x_star   rest point of the reduced oscillator, (R/Rt)^(n/4)
    f_star   constant warp solution, sqrt(R/Rt)
    omega    linearized frequency at the rest point, sqrt(Rt/(n-1))
    T0       linear period 2 pi / omega, the bifurcation threshold
    c_min    potential at the rest point (well bottom), always negative
    c_crit   energy of the degenerate contact orbit through x = 0
    """

    x_star: float
    f_star: float
    omega: float
    T0: float
    c_min: float
    c_crit: float


def _force_coeffs(params: ModelParams) -> tuple[float, float, float]:
    # force(x) = k1 x - k2 x^e with e = 1 - 4/n
    n = params.n
    k1 = n * params.Rt / (4.0 * (n - 1.0))
    k2 = n * params.R / (4.0 * (n - 1.0))
    return k1, k2, 1.0 - 4.0 / n


def _potential_coeffs(params: ModelParams) -> tuple[float, float, float]:
    # potential(x) = A x^2 - B x^q with q = 2 - 4/n; A, B > 0
    n = params.n
    k1, k2, _ = _force_coeffs(params)
    q = 2.0 - 4.0 / n
    return 0.5 * k1, k2 / q, q


def linearized_frequency(params: ModelParams) -> float:
    """Frequency of small oscillations about the rest point.

    The force gradient at x_star is Rt/(n-1) for every R, so the linear
    period depends only on the target curvature and the dimension.
    """
    return math.sqrt(params.Rt / (params.n - 1.0))


def derive_constants(params: ModelParams) -> DerivedConstants:
    """Compute the closed-form constants for one parameter set.

    T0 is defined as 2 pi / linearized_frequency(params), so the two
    agree bit for bit by construction.
    """
    n = params.n
    x_star = (params.R / params.Rt) ** (n / 4.0)
    f_star = math.sqrt(params.R / params.Rt)
    omega = linearized_frequency(params)
    return DerivedConstants(
        x_star=x_star,
        f_star=f_star,
        omega=omega,
        T0=2.0 * math.pi / omega,
        c_min=potential(x_star, params),
        c_crit=0.0,
    )


def force(x, params: ModelParams):
    """Restoring force of the reduced oscillator, defined for x > 0.

    Scalar in, scalar out; arrays map elementwise.  For n = 4 the
    exponent 1 - 4/n vanishes and the force is affine, which is why that
    dimension is isochronous.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("force requires x > 0")
    k1, k2, e = _force_coeffs(params)
    if params.n == 4:
        out = k1 * arr - k2
    else:
        out = k1 * arr - k2 * arr**e
    return float(out) if arr.ndim == 0 else out


def potential(x, params: ModelParams):
    """Antiderivative of the force, normalized so potential(0+) = 0.

    potential(x) = A x^2 - B x^q with q = 2 - 4/n in (2/3, 2); both
    coefficients are positive, so the well is a single dip below zero
    with its bottom at x_star.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("potential requires x > 0")
    A, B, q = _potential_coeffs(params)
    out = A * arr**2 - B * arr**q
    return float(out) if arr.ndim == 0 else out


def potential_above_min(x, params: ModelParams):
    """potential(x) - potential(x_star), evaluated without cancellation.

    Subtracting two nearby potential values loses every significant digit
    close to the well bottom, which is exactly where the period
    quadrature and the turning-point solves need full accuracy.  Writing
    the difference through expm1/log1p in the offset d = x - x_star keeps
    it accurate to roundoff on the whole positive axis.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("potential_above_min requires x > 0")
    A, B, q = _potential_coeffs(params)
    x_star = (params.R / params.Rt) ** (params.n / 4.0)
    d = arr - x_star
    quad = A * d * (arr + x_star)
    power = B * x_star**q * np.expm1(q * np.log1p(d / x_star))
    out = quad - power
    return float(out) if arr.ndim == 0 else out


def energy(x, v, params: ModelParams):
    """Conserved energy v^2/2 + potential(x) of the reduced motion."""
    arr_v = np.asarray(v, dtype=float)
    out = 0.5 * arr_v**2 + potential(x, params)
    return float(out) if np.ndim(out) == 0 else out


def to_warp_coords(x, v, params: ModelParams):
    """Map reduced phase data (x, v) to warp data (f, f', f'').

    Uses f = x^(2/n) together with the reduced equation of motion
    x'' = -force(x), so the second derivative needs no differencing.
    """
    arr_x = np.asarray(x, dtype=float)
    arr_v = np.asarray(v, dtype=float)
    if np.any(arr_x <= 0.0):
        raise DomainError("to_warp_coords requires x > 0")
    r = 2.0 / params.n
    f = arr_x**r
    fp = r * arr_x ** (r - 1.0) * arr_v
    acc = -force(arr_x, params)
    fpp = r * (r - 1.0) * arr_x ** (r - 2.0) * arr_v**2 + r * arr_x ** (r - 1.0) * acc
    if arr_x.ndim == 0 and arr_v.ndim == 0:
        return float(f), float(fp), float(fpp)
    return f, fp, fpp


def curvature_residual(f, fp, fpp, params: ModelParams):
    """Pointwise defect of the constant-scalar-curvature condition.

    Returns Rt f^2 + 2 (n-1) f f'' + (n-1)(n-2) f'^2 - R.  Zero exactly
    on solutions; pure evaluation, no validation.
    """
    n = params.n
    f = np.asarray(f, dtype=float)
    fp = np.asarray(fp, dtype=float)
    fpp = np.asarray(fpp, dtype=float)
    out = params.Rt * f**2 + 2.0 * (n - 1.0) * f * fpp + (n - 1.0) * (n - 2.0) * fp**2 - params.R
    return float(out) if out.ndim == 0 else out
