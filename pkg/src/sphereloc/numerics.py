"""Deterministic one-dimensional quadrature and the special integrals used
throughout the package.

All integrators here are globally adaptive Gauss-Kronrod (21 point) schemes
with a level-synchronous refinement rule: every interval whose error estimate
exceeds its share of the target (proportional to its length) is bisected,
all of them at once.  The rule is the same in the compiled kernels, so the
two backends agree to rounding.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import beta, betainc

from . import _kernels
from ._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES
from .errors import DomainError, NonIntegrable, SubdivisionLimit

__all__ = [
    "QuadratureSpec",
    "default_spec",
    "integrate_interval",
    "sin_power_integral",
    "gaussian_radial_integral",
    "gaussian_radial_total",
    "power_radial_integral",
]

ABS_TOL_ENV = "SPHERELOC_ABS_TOL"
REL_TOL_ENV = "SPHERELOC_REL_TOL"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    The returned integral satisfies ``error <= max(abs_tol, rel_tol*|I|)``
    according to the Gauss-Kronrod error estimate.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")

    def tightened(self, factor: float = 10.0) -> "QuadratureSpec":
        return replace(self, abs_tol=self.abs_tol / factor,
                       rel_tol=self.rel_tol / factor)

    def as_dict(self):
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol,
                "max_subdivisions": self.max_subdivisions}


def default_spec() -> QuadratureSpec:
    """Default tolerances, overridable through environment variables."""
    kw = {}
    if os.environ.get(ABS_TOL_ENV):
        kw["abs_tol"] = float(os.environ[ABS_TOL_ENV])
    if os.environ.get(REL_TOL_ENV):
        kw["rel_tol"] = float(os.environ[REL_TOL_ENV])
    return QuadratureSpec(**kw)


def _eval(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    return y


def integrate_interval(f, a, b, spec: QuadratureSpec | None = None, points=None):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` is called with numpy arrays of abscissae and must return values of
    the same shape (a scalar result is broadcast, so constants work).
    Optional ``points`` are interior breakpoints where ``f`` is known to be
    non-smooth; the initial partition starts there.

    Raises
    ------
    SubdivisionLimit
        if the tolerance cannot be met within ``spec.max_subdivisions``
        intervals.
    """
    spec = spec or default_spec()
    a = float(a)
    b = float(b)
    if not a <= b:
        raise DomainError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    edges = [a]
    if points is not None:
        edges.extend(sorted(float(p) for p in points if a < p < b))
    edges.append(b)
    edges = np.array(edges)
    lo = edges[:-1]
    hi = edges[1:]
    total_len = b - a

    done_val = 0.0
    n_intervals = lo.size
    while True:
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        y = _eval(f, x)
        kron = half * (y @ KRONROD_WEIGHTS)
        gauss = half * (y @ GAUSS_WEIGHTS)
        err = np.abs(kron - gauss)
        target = max(spec.abs_tol, spec.rel_tol * abs(done_val + kron.sum()))
        ok = err <= target * (hi - lo) / total_len
        done_val += kron[ok].sum()
        if ok.all():
            return float(done_val)
        bad_lo = lo[~ok]
        bad_hi = hi[~ok]
        n_intervals += bad_lo.size
        if n_intervals > spec.max_subdivisions:
            raise SubdivisionLimit(
                f"tolerance {target:.3g} not reached on [{a}, {b}] within "
                f"{spec.max_subdivisions} subdivisions")
        bad_mid = 0.5 * (bad_lo + bad_hi)
        lo = np.concatenate([bad_lo, bad_mid])
        hi = np.concatenate([bad_mid, bad_hi])


_ANGLE_SLACK = 1e-12


_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def _sin_power_from_zero(m, x):
    """Integral of ``sin**m`` over ``[0, x]`` for ``0 <= x <= pi/2``.

    Half the incomplete beta integral ``B(sin(x)**2; (m+1)/2, 1/2)``, which
    keeps full relative accuracy as ``x -> 0``.
    """
    a = 0.5 * (m + 1)
    return 0.5 * betainc(a, 0.5, math.sin(x) ** 2) * beta(a, 0.5)


def _sin_power_quarter(m, u, v):
    """Integral of ``sin**m`` over ``[u, v]`` inside ``[0, pi/2]``."""
    if v - u >= 0.5 * v:
        # the lower part is at most 2**-(m+1) of the upper, no cancellation
        return _sin_power_from_zero(m, v) - _sin_power_from_zero(m, u)
    # u >= v/2: sin**m behaves like a degree-m polynomial on [u, v]
    half = 0.5 * (v - u)
    x = 0.5 * (u + v) + half * _GL_X
    return half * float(np.dot(_GL_W, np.sin(x) ** m))


def sin_power_integral(m: int, a: float, b: float) -> float:
    """Integral of ``sin(x)**m`` over ``[a, b]`` inside ``[0, pi]``.

    The interval is folded onto ``[0, pi/2]`` by the symmetry about ``pi/2``.
    Pieces reaching toward 0 use the incomplete beta function; pieces short
    compared with their distance from 0 use 32-point Gauss-Legendre.  Both
    keep relative accuracy for tiny intervals, where the textbook reduction
    formula cancels catastrophically.
    """
    m = int(m)
    if m < 0:
        raise DomainError(f"exponent must be nonnegative, got {m}")
    if not (-_ANGLE_SLACK <= a <= b <= math.pi + _ANGLE_SLACK):
        raise DomainError(f"[{a}, {b}] is not inside [0, pi]")
    a = min(max(a, 0.0), math.pi)
    b = min(max(b, 0.0), math.pi)
    if a == b:
        return 0.0
    if m == 0:
        return b - a
    h = 0.5 * math.pi
    total = 0.0
    if a < h:
        total += _sin_power_quarter(m, a, min(b, h))
    if b > h:
        total += _sin_power_quarter(m, math.pi - b, math.pi - max(a, h))
    return total


def gaussian_radial_total(n: int) -> float:
    """Integral of ``r**(n-1) exp(-r**2/2)`` over ``[0, inf)``: ``2**(n/2-1) Gamma(n/2)``."""
    if n < 1:
        raise DomainError(f"dimension must be at least 1, got {n}")
    return 2.0 ** (0.5 * n - 1.0) * math.gamma(0.5 * n)


def gaussian_radial_integral(n: int, upper, spec: QuadratureSpec | None = None):
    """Integral of ``r**(n-1) exp(-r**2/2)`` over ``[0, upper]``.

    Evaluated in closed form through the regularized incomplete gamma
    function, so ``spec`` is accepted for interface symmetry only.
    ``upper`` may be an array and may contain ``inf``.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"dimension must be at least 1, got {n}")
    u = np.asarray(upper, dtype=float)
    if np.any(u < 0) or np.any(np.isnan(u)):
        raise DomainError("upper limit must be nonnegative")
    out = _kernels.gaussian_radial(n, u)
    return float(out) if np.ndim(out) == 0 else out


def power_radial_integral(p: float, upper):
    """Integral of ``r**p`` over ``[0, upper]`` for ``p > -1``."""
    if not p > -1:
        raise DomainError(f"power exponent must exceed -1, got {p}")
    u = np.asarray(upper, dtype=float)
    if np.any(np.isinf(u)):
        raise NonIntegrable("power weight is not integrable to infinity")
    if np.any(u < 0):
        raise DomainError("upper limit must be nonnegative")
    out = u ** (p + 1.0) / (p + 1.0)
    return float(out) if np.ndim(out) == 0 else out
