"""Cone-measure ratios of a planar body and its polar, and the resulting
volume-product lower bound.

For a symmetric planar body ``S`` with ``1 < rho_S <= sqrt(n+1)`` the ratio

    alpha(n, theta, I, S) = mu(C(I) & S) mu(C(I) & S°) / (int_I g)**2,

with ``mu`` the cone measure of radial weight ``r**n`` and angular density
``g = cos(t + theta)**(n-1)``, is maximized over ``theta`` after minimizing
over intervals ``I``.  The minimum of that over bodies gives a constant
``alpha(n)`` and the bound ``4 alpha(n-1) pi**n / Gamma(n/2)**2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conemeasure import ConeMeasure2D, Power, angular_integral, cone_body_measure
from .convex2d import Cone2D, ConvexBody2D, Disk, ball_sandwich_check, polar_dual
from .errors import DegenerateInterval, DomainError, SandwichViolation
from .numerics import QuadratureSpec, default_spec
from .sampling import random_sandwich_polygon

__all__ = [
    "AlphaSearchConfig", "AlphaResult", "AlphaEstimate", "MahlerBound",
    "alpha_term", "alpha_for_body", "alpha_estimate", "mahler_bound",
]

HALF_PI = 0.5 * math.pi
DENOM_FLOOR = 1e-14
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class AlphaSearchConfig:
    """Grids and sampling for the nested optimization.

    ``radial_bounds`` defaults to ``(1, sqrt(n + 1))``; sampled bodies must
    contain the inner ball strictly and lie inside the outer one.
    """

    n: int
    theta_grid: int = 16
    interval_grid: int = 48
    min_interval_length: float = 0.02
    vertex_range: tuple = (2, 6)
    radial_bounds: tuple | None = None
    sample_count: int = 48
    refine_iters: int = 24
    golden_iters: int = 8
    seed: int = 20240601

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be at least 2, got {self.n}")
        if not self.min_interval_length > 0:
            raise DomainError("min_interval_length must be positive")
        if self.theta_grid < 1 or self.interval_grid < 2:
            raise DomainError("theta_grid >= 1 and interval_grid >= 2 required")
        if self.sample_count < 0 or self.refine_iters < 0 or self.golden_iters < 0:
            raise DomainError("counts must be nonnegative")
        lo, hi = self.bounds
        if not (lo >= 1.0 and lo < hi <= math.sqrt(self.n + 1) + 1e-12):
            raise DomainError(f"radial bounds {self.bounds} violate 1 <= inner < outer <= sqrt(n+1)")
        a, b = self.vertex_range
        if not 2 <= a <= b:
            raise DomainError(f"bad vertex range {self.vertex_range}")

    @property
    def bounds(self):
        if self.radial_bounds is None:
            return (1.0, math.sqrt(self.n + 1))
        return tuple(float(v) for v in self.radial_bounds)

    def as_dict(self):
        return {"n": self.n, "theta_grid": self.theta_grid,
                "interval_grid": self.interval_grid,
                "min_interval_length": self.min_interval_length,
                "vertex_range": list(self.vertex_range),
                "radial_bounds": list(self.bounds),
                "sample_count": self.sample_count, "refine_iters": self.refine_iters,
                "golden_iters": self.golden_iters, "seed": self.seed}


@dataclass(frozen=True)
class AlphaResult:
    value: float
    theta: float
    interval: tuple
    at_min_length: bool
    evaluations: int

    def as_dict(self):
        return {"alpha": self.value, "theta": self.theta, "interval": list(self.interval),
                "at_min_length": self.at_min_length, "evaluations": self.evaluations}


@dataclass(frozen=True)
class AlphaEstimate:
    """Minimum over a finite sample of bodies: an upper estimate of ``alpha(n)``."""

    value: float
    best_body: ConvexBody2D
    best: AlphaResult
    samples: int
    seed: int
    upper_estimate: bool = True

    def as_dict(self):
        return {"alpha_estimate": self.value, "upper_estimate": self.upper_estimate,
                "best_body": self.best_body.to_dict(), "best": self.best.as_dict(),
                "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class MahlerBound:
    bound: float
    sphere_form: float
    params: dict = field(default_factory=dict)

    def as_dict(self):
        return {"bound": self.bound, "sphere_form": self.sphere_form, **self.params}


def _check_sandwich(S, n):
    if not ball_sandwich_check(S, 1.0, math.sqrt(n + 1)):
        raise SandwichViolation(
            f"body must strictly contain the unit disk and lie in the disk of radius sqrt({n + 1})")


def alpha_term(n: int, theta: float, I: Cone2D, S: ConvexBody2D,
               spec: QuadratureSpec | None = None, dual: ConvexBody2D | None = None,
               check: bool = True) -> float:
    """``alpha(n, theta, I, S)``.

    ``dual`` may pass a precomputed polar of ``S``; ``check=False`` skips the
    sandwich validation for callers that already did it.

    Raises
    ------
    DegenerateInterval
        when the angular normalization falls below 1e-14.
    PhaseDomain
        when ``cos(t + theta)`` changes sign on ``I``.
    SandwichViolation
        when ``S`` is outside the admissible class.
    """
    spec = spec or default_spec()
    if check:
        _check_sandwich(S, n)
    cm = ConeMeasure2D(I, theta, n - 1, Power(n))
    den = angular_integral(n - 1, theta, I.t_lo, I.t_hi)
    if den < DENOM_FLOOR:
        raise DegenerateInterval(f"angular normalization {den:.3g} on [{I.t_lo}, {I.t_hi}]")
    dual = polar_dual(S) if dual is None else dual
    return cone_body_measure(cm, S, spec) * cone_body_measure(cm, dual, spec) / den ** 2


# ---------------------------------------------------------------------------
# inner minimization over intervals
# ---------------------------------------------------------------------------

def _rho_pow(K, t, p):
    return np.asarray(K.radial_function(t), dtype=float) ** p


def _breaks(K, lo, hi):
    return K.pieces(lo, hi)[:, 0]


def _cell_integrals(n, theta, S, dual, grid):
    """Per-cell integrals of the two numerator densities and of ``g``.

    Each grid cell is split at the radial functions' breakpoints and
    integrated with 16-point Gauss-Legendre, which is accurate to rounding
    on the smooth pieces.
    """
    lo, hi = grid[0], grid[-1]
    edges = np.unique(np.concatenate([grid, _breaks(S, lo, hi), _breaks(dual, lo, hi)]))
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[:, None] + half[:, None] * _GL_X[None, :]
    g = np.maximum(np.cos(x + theta), 0.0) ** (n - 1)
    p = n + 1
    fs = (g * _rho_pow(S, x, p)) @ _GL_W * half / p
    fd = (g * _rho_pow(dual, x, p)) @ _GL_W * half / p
    fg = g @ _GL_W * half
    owner = np.searchsorted(grid, a, side="right") - 1
    m = grid.size - 1
    return (np.bincount(owner, fs, m), np.bincount(owner, fd, m), np.bincount(owner, fg, m))


def _inner_min(n, theta, S, dual, config, spec):
    """Min over intervals inside the admissible arc, grid then coordinate descent."""
    arc_lo, arc_hi = -HALF_PI - theta, HALF_PI - theta
    L = config.min_interval_length
    grid = np.linspace(arc_lo, arc_hi, config.interval_grid + 1)
    cs, cd, cg = _cell_integrals(n, theta, S, dual, grid)
    ps, pd, pg = (np.r_[0.0, np.cumsum(v)] for v in (cs, cd, cg))
    i, j = np.triu_indices(grid.size, 1)
    ok = grid[j] - grid[i] >= L - 1e-15
    i, j = i[ok], j[ok]
    den = pg[j] - pg[i]
    good = den >= DENOM_FLOOR
    i, j, den = i[good], j[good], den[good]
    vals = (ps[j] - ps[i]) * (pd[j] - pd[i]) / den ** 2
    k = int(np.argmin(vals))
    a, b = float(grid[i[k]]), float(grid[j[k]])
    evals = 0

    def f(a, b):
        nonlocal evals
        evals += 1
        try:
            return alpha_term(n, theta, Cone2D(a, b), S, spec, dual=dual, check=False)
        except DomainError:
            return math.inf

    best = f(a, b)
    step = float(grid[1] - grid[0])
    for _ in range(config.refine_iters):
        improved = False
        for da, db in ((-step, 0), (step, 0), (0, -step), (0, step),
                       (-step, -step), (step, step)):
            na = max(a + da, arc_lo)
            nb = min(b + db, arc_hi)
            if nb - na < L:
                if da == db:
                    continue
                # slide into the minimum-length interval instead
                if da:
                    na = nb - L
                else:
                    nb = na + L
                if na < arc_lo or nb > arc_hi:
                    continue
            v = f(na, nb)
            if v < best:
                a, b, best, improved = na, nb, v, True
                break
        if not improved:
            step *= 0.5
    at_min = bool((b - a) <= L * (1 + 1e-9))
    return float(best), (float(a), float(b)), at_min, evals


def alpha_for_body(n: int, S: ConvexBody2D, config: AlphaSearchConfig | None = None,
                   spec: QuadratureSpec | None = None) -> AlphaResult:
    """``max_theta min_I alpha(n, theta, I, S)`` on grids with local refinement.

    The ``theta`` grid covers ``[0, pi]``; the best grid point is refined by
    golden-section search on its two neighbouring grid cells.
    """
    spec = spec or default_spec()
    config = config or AlphaSearchConfig(n)
    _check_sandwich(S, n)
    dual = polar_dual(S)
    total_evals = 0
    cache = {}

    def outer(theta):
        nonlocal total_evals
        if theta not in cache:
            res = _inner_min(n, theta, S, dual, config, spec)
            total_evals += res[3]
            cache[theta] = res
        return cache[theta][0]

    thetas = np.linspace(0.0, math.pi, config.theta_grid) if config.theta_grid > 1 else np.array([0.0])
    vals = [outer(float(t)) for t in thetas]
    k = int(np.argmax(vals))
    if config.theta_grid > 1 and config.golden_iters:
        lo = float(thetas[max(k - 1, 0)])
        hi = float(thetas[min(k + 1, thetas.size - 1)])
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = outer(x1), outer(x2)
        for _ in range(config.golden_iters):
            if f1 >= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = outer(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = outer(x2)
    # deterministic pick: largest value, then smallest theta
    theta = min(cache, key=lambda t: (-cache[t][0], t))
    value, interval, at_min, _ = cache[theta]
    return AlphaResult(value=value, theta=theta, interval=interval,
                       at_min_length=at_min, evaluations=total_evals)


def alpha_estimate(n: int, config: AlphaSearchConfig | None = None,
                   spec: QuadratureSpec | None = None) -> AlphaEstimate:
    """Minimum of :func:`alpha_for_body` over the disk and seeded random polygons.

    The class of bodies is infinite, so the result is an upper estimate of
    the true minimum.
    """
    spec = spec or default_spec()
    config = config or AlphaSearchConfig(n)
    if config.n != n:
        raise DomainError(f"config is for n={config.n}, not {n}")
    inner, outer_r = config.bounds
    disk = Disk(0.5 * (inner + outer_r))
    best_body, best = disk, alpha_for_body(n, disk, config, spec)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.sample_count):
        S = random_sandwich_polygon(rng, inner, outer_r, config.vertex_range)
        res = alpha_for_body(n, S, config, spec)
        if res.value < best.value:
            best_body, best = S, res
    return AlphaEstimate(value=best.value, best_body=best_body, best=best,
                         samples=config.sample_count + 1, seed=config.seed)


def mahler_bound(n: int, alpha_value: float, allow_small_n: bool = False) -> MahlerBound:
    """Lower bound ``4 alpha pi**n / Gamma(n/2)**2`` on the volume product.

    Also returns ``alpha * |S^(n-1)|**2`` with ``|S^(n-1)| = 2 pi**(n/2) / Gamma(n/2)``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    if n < 4 and not allow_small_n:
        raise DomainError(f"the bound is stated for n >= 4, got {n}")
    if not 0.0 < alpha_value < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha_value}")
    g = math.gamma(0.5 * n)
    bound = 4.0 * alpha_value * math.pi ** n / g ** 2
    area = 2.0 * math.pi ** (0.5 * n) / g
    return MahlerBound(bound=bound, sphere_form=alpha_value * area ** 2,
                       params={"n": n, "alpha": alpha_value})
