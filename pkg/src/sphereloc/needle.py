"""Spherical 1-needles and the meridian consistency harness.

A 1-needle is a geodesic arc of length at most pi carrying the probability
density ``C sin(t + phase)**(n - k)`` in arc length.  Densities written in
cosine form ``cos(t + t0)**m`` are stored with ``phase = t0 + pi/2``.

The meridian fibration of ``S^n`` (pole-to-pole half great circles, density
``sin(t)**(n-1)``) is an explicit needle partition, so averaging needle
integrals over it must reproduce the sphere integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateNeedle, DomainError
from .reports import InequalityReport
from .numerics import (QuadratureSpec, default_spec, integrate_interval,
                       sin_power_integral)

__all__ = [
    "NeedleDensity", "needle_normalize", "needle_integrate", "sphere_integrate",
    "meridian_fubini_check", "meridian_average", "sphere_function", "SPHERE_FUNCTIONS",
]

TWO_PI = 2.0 * math.pi
_SLACK = 1e-12


@dataclass(frozen=True)
class NeedleDensity:
    ambient_dim: int
    needle_dim: int
    phase: float
    support: tuple[float, float]
    scale: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        n, k = self.ambient_dim, self.needle_dim
        # k == n gives the uniform needle (exponent 0)
        if n < 2 or not 1 <= k <= n:
            raise DomainError(f"need n >= 2 and 1 <= k <= n, got n={n}, k={k}")
        if not 0.0 <= self.phase < TWO_PI:
            raise DomainError(f"phase must lie in [0, 2 pi), got {self.phase}")
        a, b = self.support
        if not 0.0 < b - a <= math.pi + _SLACK:
            raise DomainError(f"needle support [{a}, {b}] must have length in (0, pi]")
        if not self.scale > 0:
            raise DomainError("scale must be positive")
        lo, _ = self._shifted()
        if lo < -_SLACK or lo + (b - a) > math.pi + _SLACK:
            raise DomainError(
                f"sin(t + {self.phase:.6g}) is negative somewhere on [{a}, {b}]")

    @classmethod
    def from_cos_phase(cls, ambient_dim, needle_dim, t0, support, **kw):
        """Needle with density proportional to ``cos(t + t0)**(n - k)``."""
        return cls(ambient_dim, needle_dim, math.fmod(t0 + 0.5 * math.pi, TWO_PI) % TWO_PI,
                   tuple(support), **kw)

    @property
    def exponent(self) -> int:
        return self.ambient_dim - self.needle_dim

    def _shifted(self):
        """Support of ``x = t + phase`` reduced into the sine's positive arch."""
        a, b = self.support
        x = a + self.phase
        x -= TWO_PI * math.floor((x + _SLACK) / TWO_PI)
        return x, x + (b - a)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * np.sin(t + self.phase) ** self.exponent

    def mass(self) -> float:
        """Integral of the unnormalized profile ``sin(t + phase)**m`` over the support."""
        lo, hi = self._shifted()
        return sin_power_integral(self.exponent, max(lo, 0.0), min(hi, math.pi))


def needle_normalize(d: NeedleDensity) -> NeedleDensity:
    mass = d.mass()
    if not mass > 0:
        raise DegenerateNeedle(f"needle density has zero mass on {d.support}")
    return replace(d, scale=1.0 / mass, normalized=True)


def needle_integrate(d: NeedleDensity, f, spec: QuadratureSpec | None = None,
                     points=None) -> float:
    """Integral of ``f(t) * C sin(t + phase)**m`` along the needle.

    ``f`` is evaluated on numpy arrays of arc-length parameters.
    """
    if not d.normalized:
        raise DomainError("needle_integrate expects a normalized needle")
    a, b = d.support
    return integrate_interval(lambda t: f(t) * d.density(t), a, b, spec, points)


# ---------------------------------------------------------------------------
# sphere integrals
# ---------------------------------------------------------------------------

def _s2_point(polar, azim):
    s = np.sin(polar)
    return np.stack([s * np.cos(azim), s * np.sin(azim),
                     np.cos(polar) * np.ones_like(azim)], axis=-1)


def _s3_point(chi, polar, azim):
    s = np.sin(chi)
    sp = np.sin(polar)
    return np.stack([s * sp * np.cos(azim), s * sp * np.sin(azim),
                     s * np.cos(polar) * np.ones_like(azim),
                     np.cos(chi) * np.ones_like(azim)], axis=-1)


def sphere_integrate(n: int, f, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f`` against the normalized volume of ``S^n``, ``n`` in {2, 3}.

    ``f`` maps an array of points of shape ``(..., n+1)`` to values of shape
    ``(...)``.  Evaluated by iterated adaptive quadrature in hyperspherical
    coordinates; the last coordinate is the polar axis.
    """
    spec = spec or default_spec()
    inner = replace(spec, abs_tol=spec.abs_tol / 10)
    if n == 2:
        def over_polar(polar):
            return np.array([
                math.sin(p) * integrate_interval(
                    lambda az, p=p: f(_s2_point(p, az)), 0.0, TWO_PI, inner)
                for p in np.ravel(polar)]).reshape(np.shape(polar))
        return integrate_interval(over_polar, 0.0, math.pi, spec) / (4.0 * math.pi)
    if n == 3:
        def over_polar(chi):
            def g(polar):
                return np.array([
                    math.sin(p) * integrate_interval(
                        lambda az, p=p: f(_s3_point(chi, p, az)), 0.0, TWO_PI, inner)
                    for p in np.ravel(polar)]).reshape(np.shape(polar))
            return integrate_interval(g, 0.0, math.pi, inner)

        def over_chi(chi):
            return np.array([math.sin(c) ** 2 * over_polar(c) for c in np.ravel(chi)]
                            ).reshape(np.shape(chi))
        return integrate_interval(over_chi, 0.0, math.pi, spec) / (2.0 * math.pi ** 2)
    raise DomainError(f"sphere_integrate supports n in {{2, 3}}, got {n}")


def _equatorial_directions(n: int, directions: int):
    """Deterministic quadrature on the equatorial ``S^(n-1)``: points and weights summing to 1.

    For ``n = 2`` a uniform azimuth grid; for ``n = 3`` a product of a uniform
    azimuth grid with Gauss-Legendre nodes in the cosine of the polar angle.
    """
    az = TWO_PI * np.arange(directions) / directions
    if n == 2:
        return np.c_[np.cos(az), np.sin(az)], np.full(directions, 1.0 / directions)
    if n == 3:
        m = max(directions // 2, 1)
        x, w = np.polynomial.legendre.leggauss(m)
        sp = np.sqrt(1.0 - x * x)
        pts = np.stack([np.outer(sp, np.cos(az)), np.outer(sp, np.sin(az)),
                        np.outer(x, np.ones_like(az))], axis=-1).reshape(-1, 3)
        wts = np.outer(w / 2.0, np.full(directions, 1.0 / directions)).ravel()
        return pts, wts
    raise DomainError(f"meridian harness supports n in {{2, 3}}, got {n}")


def meridian_average(n: int, f, directions: int, spec: QuadratureSpec | None = None) -> float:
    """Average over equatorial directions ``u`` of the needle integral of ``f``
    along the meridian ``t -> (sin t * u, cos t)``."""
    spec = spec or default_spec()
    needle = needle_normalize(NeedleDensity(n, 1, 0.0, (0.0, math.pi)))
    dirs, wts = _equatorial_directions(n, directions)
    vals = np.empty(len(wts))
    for i, u in enumerate(dirs):
        def along(t, u=u):
            t = np.asarray(t)
            return f(np.concatenate([np.sin(t)[..., None] * u, np.cos(t)[..., None]], axis=-1))
        vals[i] = needle_integrate(needle, along, spec)
    return float(np.dot(wts, vals))


def meridian_fubini_check(n: int, f, directions: int = 32,
                          spec: QuadratureSpec | None = None) -> InequalityReport:
    """Compare the sphere integral of ``f`` with its meridian-needle average.

    Returns an agreement report whose margin is the absolute difference;
    it holds within ``max(10 * spec.abs_tol, 1e-8)``.
    """
    spec = spec or default_spec()
    direct = sphere_integrate(n, f, spec)
    fibred = meridian_average(n, f, directions, spec)
    diff = abs(direct - fibred)
    tol = max(10 * spec.abs_tol, 1e-8)
    return InequalityReport(lhs=direct, rhs=fibred, margin=diff, tolerance=tol,
                            params={"n": n, "directions": directions,
                                    "difference": "absolute"},
                            kind="agreement")


# ---------------------------------------------------------------------------
# named integrands for the harness
# ---------------------------------------------------------------------------

SPHERE_FUNCTIONS = ("constant", "coordinate", "coordinate2", "zonal", "random")


def sphere_function(name: str, n: int, seed: int = 0, degree: int = 3):
    """A named test integrand on ``S^n`` taking points of shape ``(..., n+1)``.

    ``random`` is a seeded polynomial of total degree ``degree`` in the
    ambient coordinates with standard normal coefficients.
    """
    if name == "constant":
        return lambda x: np.ones(x.shape[:-1])
    if name == "coordinate":
        return lambda x: x[..., 0]
    if name == "coordinate2":
        return lambda x: x[..., 0] ** 2
    if name == "zonal":
        return lambda x: np.exp(x[..., -1]) + x[..., -1] ** 3
    if name == "random":
        rng = np.random.default_rng(seed)
        exps = [e for e in np.ndindex(*(degree + 1,) * (n + 1)) if sum(e) <= degree]
        coef = rng.standard_normal(len(exps))
        powers = np.array(exps)

        def poly(x):
            mono = np.prod(x[..., None, :] ** powers, axis=-1)
            return mono @ coef
        return poly
    raise DomainError(f"unknown sphere function {name!r}; choose from {SPHERE_FUNCTIONS}")
