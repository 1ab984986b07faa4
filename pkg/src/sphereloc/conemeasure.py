"""Weighted planar cone measures.

A cone measure has density ``cos(t + phase)**m * w(r)`` in polar
coordinates on the cone over ``[t_lo, t_hi]``, with radial weight either
Gaussian ``r**(n-1) exp(-r**2/2)`` or a power ``r**p``.  Its value on a body
``K`` integrates the closed-form radial antiderivative up to ``rho_K(t)``
over the angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .convex2d import Cone2D, ConvexBody2D, WholePlane
from .errors import DomainError, NonIntegrable, PhaseDomain, SubdivisionLimit
from .numerics import (QuadratureSpec, default_spec, gaussian_radial_total,
                       sin_power_integral)

__all__ = [
    "Gaussian", "Power", "RadialWeight", "ConeMeasure2D", "phase_admissible",
    "admissible_phase_intervals", "angular_integral", "cone_body_measure",
    "brute_force_cone_measure",
]

PHASE_SLACK = 1e-12
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Gaussian:
    """Radial weight ``r**(n-1) exp(-r**2/2)``."""

    ambient_dim: int

    def __post_init__(self):
        if int(self.ambient_dim) != self.ambient_dim or self.ambient_dim < 1:
            raise DomainError(f"Gaussian weight needs an integer dimension >= 1, got {self.ambient_dim}")

    def density(self, r):
        return r ** (self.ambient_dim - 1) * np.exp(-0.5 * r * r)


@dataclass(frozen=True)
class Power:
    """Radial weight ``r**p``, ``p > -1``."""

    exponent: float

    def __post_init__(self):
        if not self.exponent > -1:
            raise DomainError(f"power weight needs exponent > -1, got {self.exponent}")

    def density(self, r):
        return r ** self.exponent


RadialWeight = Union[Gaussian, Power]


def phase_admissible(lo: float, hi: float, phase: float) -> bool:
    """Whether ``cos(t + phase) >= 0`` on all of ``[lo, hi]``."""
    if hi - lo > math.pi + PHASE_SLACK:
        return False
    a = lo + phase
    k = math.floor((a + HALF_PI + PHASE_SLACK) / (2 * math.pi))
    a -= 2 * math.pi * k
    b = hi + phase - 2 * math.pi * k
    return a >= -HALF_PI - PHASE_SLACK and b <= HALF_PI + PHASE_SLACK


def admissible_phase_intervals(lo: float, hi: float, within=(0.0, math.pi)):
    """Sub-intervals of ``within`` whose phases keep ``cos(t+phase) >= 0`` on ``[lo, hi]``.

    The admissible phases form the arc ``[-pi/2 - lo, pi/2 - hi]`` modulo
    ``2 pi``; it is empty when the cone is wider than pi.
    """
    length = hi - lo
    if length > math.pi + PHASE_SLACK:
        return []
    arc_lo = -HALF_PI - lo
    arc_hi = HALF_PI - hi
    if arc_hi < arc_lo:  # length within slack of pi
        arc_hi = arc_lo
    w_lo, w_hi = within
    out = []
    k_min = math.floor((w_lo - arc_hi) / (2 * math.pi)) - 1
    k_max = math.ceil((w_hi - arc_lo) / (2 * math.pi)) + 1
    for k in range(k_min, k_max + 1):
        a = max(arc_lo + 2 * math.pi * k, w_lo)
        b = min(arc_hi + 2 * math.pi * k, w_hi)
        if b >= a - PHASE_SLACK:
            out.append((min(a, b), b))
    return out


@dataclass(frozen=True)
class ConeMeasure2D:
    """Measure ``cos(t + phase)**m w(r) dr dt`` on a planar cone.

    For ``m >= 1`` the density must be nonnegative on the cone; intervals
    where ``cos(t + phase)`` changes sign are rejected, never clipped.
    """

    cone: Cone2D
    phase: float
    exponent: int
    weight: RadialWeight

    def __post_init__(self):
        if int(self.exponent) != self.exponent or self.exponent < 0:
            raise DomainError(f"angular exponent must be a nonnegative integer, got {self.exponent}")
        if not (-PHASE_SLACK <= self.phase <= math.pi + PHASE_SLACK):
            raise DomainError(f"phase must lie in [0, pi], got {self.phase}")
        if self.exponent >= 1 and self.cone.length > 0 and not phase_admissible(
                self.cone.t_lo, self.cone.t_hi, self.phase):
            raise PhaseDomain(
                f"cos(t + {self.phase:.6g}) changes sign on "
                f"[{self.cone.t_lo:.6g}, {self.cone.t_hi:.6g}]")

    def angular_density(self, t):
        t = np.asarray(t, dtype=float)
        if self.exponent == 0:
            return np.ones_like(t)
        return np.cos(t + self.phase) ** self.exponent

    def with_cone(self, cone: Cone2D) -> "ConeMeasure2D":
        return ConeMeasure2D(cone, self.phase, self.exponent, self.weight)


def angular_integral(m: int, phase: float, lo: float, hi: float) -> float:
    """Closed form of the integral of ``cos(t + phase)**m`` over ``[lo, hi]``
    (``m >= 1`` requires a nonnegative density there)."""
    if hi <= lo:
        return 0.0
    if m == 0:
        return hi - lo
    if not phase_admissible(lo, hi, phase):
        raise PhaseDomain(f"cos(t + {phase:.6g}) changes sign on [{lo:.6g}, {hi:.6g}]")
    a = lo + phase + HALF_PI
    k = math.floor((a + PHASE_SLACK) / (2 * math.pi))
    a -= 2 * math.pi * k
    b = hi + phase + HALF_PI - 2 * math.pi * k
    return sin_power_integral(m, a, b)


def _weight_args(weight):
    if isinstance(weight, Gaussian):
        return _kernels.WEIGHT_GAUSSIAN, float(weight.ambient_dim)
    return _kernels.WEIGHT_POWER, float(weight.exponent)


def cone_body_measure(cm: ConeMeasure2D, K: ConvexBody2D,
                      spec: QuadratureSpec | None = None) -> float:
    """Measure of ``K`` intersected with the cone.

    Raises
    ------
    NonIntegrable
        for a power weight when ``K`` is unbounded on the cone.
    """
    spec = spec or default_spec()
    lo, hi = cm.cone.t_lo, cm.cone.t_hi
    if hi <= lo:
        return 0.0
    if isinstance(cm.weight, Power) and K.unbounded_on(lo, hi):
        raise NonIntegrable(f"{K!r} is unbounded on the cone; power weight diverges")
    if isinstance(K, WholePlane):
        return gaussian_radial_total(cm.weight.ambient_dim) * angular_integral(
            cm.exponent, cm.phase, lo, hi)
    wkind, wparam = _weight_args(cm.weight)
    value, n_int, ok = _kernels.cone_integral(
        K.pieces(lo, hi), cm.phase, cm.exponent, wkind, wparam,
        spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
    if not ok:
        raise SubdivisionLimit(
            f"cone measure did not converge within {spec.max_subdivisions} subdivisions")
    return value


def gaussian_truncation_radius(n: int, floor: float = 1e-16) -> float:
    """Radius beyond the mode where ``r**(n-1) exp(-r**2/2)`` drops below ``floor``."""
    r = 10.0
    for _ in range(100):
        r_new = math.sqrt(2.0 * ((n - 1) * math.log(r) - math.log(floor)))
        if abs(r_new - r) < 1e-13:
            break
        r = r_new
    return r


def brute_force_cone_measure(cm: ConeMeasure2D, K: ConvexBody2D,
                             grid_n: int = 2000, chunk: int = 250) -> float:
    """Midpoint Riemann sum of the density over ``{(r, t): r <= rho_K(t)}``.

    The ``(r, t)`` grid is fitted to the body: the radial coordinate runs over
    ``r = s * rho_K(t)`` with ``s`` on a uniform midpoint grid, which keeps the
    boundary of the region on grid lines.  Only pointwise values of the
    density and of the radial function enter, never the closed-form radial
    antiderivatives or the adaptive kernels.  Gaussian weights are truncated
    where they fall below 1e-16.
    """
    lo, hi = cm.cone.t_lo, cm.cone.t_hi
    if hi <= lo:
        return 0.0
    dt = (hi - lo) / grid_n
    t = lo + (np.arange(grid_n) + 0.5) * dt
    rho = np.asarray(K.radial_function(t), dtype=float)
    if isinstance(cm.weight, Gaussian):
        rho = np.minimum(rho, gaussian_truncation_radius(cm.weight.ambient_dim))
    elif np.any(np.isinf(rho)):
        raise NonIntegrable(f"{K!r} is unbounded on the cone; power weight diverges")
    s = (np.arange(grid_n) + 0.5) / grid_n
    ang = cm.angular_density(t)
    total = 0.0
    for start in range(0, grid_n, chunk):
        sl = slice(start, start + chunk)
        r = rho[sl, None] * s[None, :]
        radial = cm.weight.density(r).sum(axis=1) * rho[sl] / grid_n
        total += float(np.dot(ang[sl], radial))
    return total * dt
