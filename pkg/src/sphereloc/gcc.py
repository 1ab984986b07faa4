"""Gaussian-correlation checks in the plane and on weighted cones.

All cone measures here carry the Gaussian radial weight
``r**(n-1) exp(-r**2/2)`` and angular density ``cos(t + t0)**(n-2)``; they
are the two-dimensional shadows of the ``n``-dimensional Gaussian measure
along a needle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conemeasure import (ConeMeasure2D, Gaussian, admissible_phase_intervals,
                          angular_integral, cone_body_measure, phase_admissible)
from .convex2d import Cone2D, ConvexBody2D, Intersection, Strip, WholePlane, intersect
from .errors import DivisionByZero, DomainError, EmptyAdmissibleSet, PhaseDomain
from .needle import NeedleDensity, needle_integrate, needle_normalize
from .numerics import (QuadratureSpec, default_spec, gaussian_radial_integral,
                       gaussian_radial_total)
from .reports import InequalityReport, NotFound, Witness

__all__ = [
    "InequalityReport", "Witness", "NotFound", "T0Result",
    "sector_function", "gaussian_measure_2d", "check_full_correlation_2d",
    "cone_factors", "check_cone_inequality", "needle_cone_consistency",
    "strip_ratio", "hunt_strip_counterexample", "witness_bodies",
    "confirm_witness", "find_t0",
]

HALF_PI = 0.5 * math.pi


def sector_function(K: ConvexBody2D, n: int, u):
    """Gaussian radial mass of ``K`` along the ray in direction ``u``."""
    return gaussian_radial_integral(n, K.radial_function(u))


def gaussian_measure_2d(K: ConvexBody2D, spec: QuadratureSpec | None = None) -> float:
    """Standard Gaussian measure of a symmetric planar body.

    By symmetry it is ``1/pi`` times the angular integral of the sector
    function over a half turn.
    """
    if isinstance(K, WholePlane):
        return 1.0
    cm = ConeMeasure2D(Cone2D(0.0, math.pi), 0.0, 0, Gaussian(2))
    return cone_body_measure(cm, K, spec) / math.pi


def check_full_correlation_2d(K1, K2, spec: QuadratureSpec | None = None) -> InequalityReport:
    """Report on ``gamma(R^2) gamma(K1 & K2) >= gamma(K1) gamma(K2)``."""
    spec = spec or default_spec()
    g1 = gaussian_measure_2d(K1, spec)
    g2 = gaussian_measure_2d(K2, spec)
    g12 = gaussian_measure_2d(intersect(K1, K2), spec)
    return InequalityReport(lhs=g12, rhs=g1 * g2, margin=g12 - g1 * g2,
                            tolerance=10 * spec.abs_tol,
                            params={"gamma_k1": g1, "gamma_k2": g2, "gamma_both": g12})


def _cone_measure(C: Cone2D, t0: float, n: int) -> ConeMeasure2D:
    if n < 2:
        raise DomainError(f"dimension must be at least 2, got {n}")
    return ConeMeasure2D(C, t0, n - 2, Gaussian(n))


def cone_factors(C: Cone2D, t0: float, n: int, K1, K2,
                 spec: QuadratureSpec | None = None, both=None) -> dict:
    """The four cone measures: whole cone, ``K1 & K2``, ``K1``, ``K2``.

    ``both`` may pass a precomputed ``intersect(K1, K2)``.
    """
    spec = spec or default_spec()
    cm = _cone_measure(C, t0, n)
    whole = gaussian_radial_total(n) * angular_integral(n - 2, t0, C.t_lo, C.t_hi)
    return {
        "cone": whole,
        "both": cone_body_measure(cm, intersect(K1, K2) if both is None else both, spec),
        "k1": cone_body_measure(cm, K1, spec),
        "k2": cone_body_measure(cm, K2, spec),
    }


def check_cone_inequality(C: Cone2D, t0: float, n: int, K1, K2,
                          spec: QuadratureSpec | None = None, both=None) -> InequalityReport:
    """Report on ``mu(C) mu(K1 & K2 & C) >= mu(K1 & C) mu(K2 & C)``."""
    spec = spec or default_spec()
    f = cone_factors(C, t0, n, K1, K2, spec, both)
    lhs = f["cone"] * f["both"]
    rhs = f["k1"] * f["k2"]
    scale = max(abs(lhs), abs(rhs), 1.0)
    return InequalityReport(lhs=lhs, rhs=rhs, margin=lhs - rhs,
                            tolerance=10 * spec.abs_tol * scale,
                            params={"cone": [C.t_lo, C.t_hi], "t0": t0, "n": n,
                                    "factors": f})


def _needle_side(needle, K, n, C, spec):
    if isinstance(K, WholePlane):
        total = gaussian_radial_total(n)
        return needle_integrate(needle, lambda t: np.full(np.shape(t), total), spec)
    breaks = K.pieces(C.t_lo, C.t_hi)[1:, 0]
    return needle_integrate(needle, lambda t: sector_function(K, n, t), spec, points=breaks)


def needle_cone_consistency(C: Cone2D, t0: float, n: int, K1, K2,
                            spec: QuadratureSpec | None = None) -> InequalityReport:
    """Compare the needle-integral product ratio with the cone-measure one.

    The needle side integrates sector functions against the normalized
    needle density ``cos(t + t0)**(n-2)`` on the cone's arc; the cone side
    uses :func:`cone_factors`.  The margin is the relative difference of the
    ratios ``lhs / rhs``, in which the normalizations cancel.

    Raises
    ------
    DivisionByZero
        if a right-hand factor vanishes on either side.
    """
    spec = spec or default_spec()
    if n < 3:
        raise DomainError(f"needle route needs n >= 3, got {n}")
    if not phase_admissible(C.t_lo, C.t_hi, t0):
        raise PhaseDomain(f"cos(t + {t0:.6g}) changes sign on [{C.t_lo:.6g}, {C.t_hi:.6g}]")
    needle = needle_normalize(NeedleDensity.from_cos_phase(n - 1, 1, t0, (C.t_lo, C.t_hi)))
    nd = {
        "cone": _needle_side(needle, WholePlane(), n, C, spec),
        "both": _needle_side(needle, intersect(K1, K2), n, C, spec),
        "k1": _needle_side(needle, K1, n, C, spec),
        "k2": _needle_side(needle, K2, n, C, spec),
    }
    cf = cone_factors(C, t0, n, K1, K2, spec)
    if nd["k1"] * nd["k2"] == 0 or cf["k1"] * cf["k2"] == 0:
        raise DivisionByZero("a right-hand factor vanishes")
    r_needle = nd["cone"] * nd["both"] / (nd["k1"] * nd["k2"])
    r_cone = cf["cone"] * cf["both"] / (cf["k1"] * cf["k2"])
    rel = abs(r_needle - r_cone) / abs(r_cone)
    return InequalityReport(lhs=r_needle, rhs=r_cone, margin=rel, tolerance=1e-8,
                            params={"cone": [C.t_lo, C.t_hi], "t0": t0, "n": n,
                                    "needle_factors": nd, "cone_factors": cf,
                                    "difference": "relative"},
                            kind="agreement")


# ---------------------------------------------------------------------------
# strip counterexample hunt
# ---------------------------------------------------------------------------

# continuous coordinates: t0, cone length, cone position in [0, 1],
# two normal angles, two log half widths
_LOG_W = (math.log(0.02), math.log(10.0))
_BOX = np.array([
    [0.0, math.pi],
    [0.02, math.pi],
    [0.0, 1.0],
    [0.0, math.pi],
    [0.0, math.pi],
    list(_LOG_W),
    list(_LOG_W),
])
_N_RANGE = (3, 8)


def _decode(n, x):
    t0, length, pos, a1, a2, lw1, lw2 = (float(v) for v in x)
    lo = -HALF_PI - t0 + pos * (math.pi - length)
    return {"n": int(n), "t0": t0, "cone": [lo, lo + length],
            "strip_angles": [a1, a2], "half_widths": [math.exp(lw1), math.exp(lw2)]}


def witness_bodies(params):
    """Rebuild ``(cone, t0, n, S1, S2)`` from a hunt parameter record."""
    (a1, a2), (w1, w2) = params["strip_angles"], params["half_widths"]
    return (Cone2D(*params["cone"]), params["t0"], params["n"],
            Strip(a1, w1), Strip(a2, w2))


def strip_ratio(params, spec: QuadratureSpec | None = None):
    """``mu(C) mu(S1 & S2 & C) / (mu(S1 & C) mu(S2 & C))`` and the factors."""
    C, t0, n, s1, s2 = witness_bodies(params)
    f = cone_factors(C, t0, n, s1, s2, spec)
    den = f["k1"] * f["k2"]
    if not den > 0:
        return math.inf, f
    return f["cone"] * f["both"] / den, f


def _key(ratio, n, x):
    return (ratio, n, tuple(float(v) for v in x))


def hunt_strip_counterexample(seed: int = 20240601, budget: int = 100_000,
                              spec: QuadratureSpec | None = None,
                              keep: int = 8):
    """Search for strips violating the cone inequality.

    Half of ``budget`` evaluations go to seeded uniform sampling of
    ``(n, t0, cone, angles, widths)``; the rest refine the ``keep`` best
    samples by coordinate descent with step halving.  Candidates are
    ordered by ``(ratio, n, parameters)`` so the result is reproducible.

    Returns
    -------
    Witness
        best instance, if its ratio is below ``1 - 10 * spec.abs_tol``.
    NotFound
        otherwise, carrying the minimum ratio seen.
    """
    spec = spec or default_spec()
    budget = int(budget)
    if budget <= 0:
        return NotFound(best=math.inf, evaluations=0)
    rng = np.random.default_rng(seed)
    evals = 0

    def evaluate(n, x):
        nonlocal evals
        evals += 1
        try:
            r, _ = strip_ratio(_decode(n, x), spec)
        except DomainError:
            r = math.inf
        return r

    n_random = max(1, budget // 2)
    lows, highs = _BOX[:, 0], _BOX[:, 1]
    pool = []
    for _ in range(n_random):
        n = int(rng.integers(_N_RANGE[0], _N_RANGE[1] + 1))
        x = rng.uniform(lows, highs)
        pool.append(_key(evaluate(n, x), n, x))
    pool.sort()
    best = pool[0]

    starts = pool[:keep]
    share = (budget - evals) // max(len(starts), 1)
    span = highs - lows
    for ratio, n, x in starts:
        x = np.array(x)
        step = 0.05 * span
        used = 0
        while used < share and np.any(step > 1e-9 * span):
            improved = False
            for i in range(len(x)):
                for sgn in (1.0, -1.0):
                    if used >= share:
                        break
                    y = x.copy()
                    y[i] = min(max(y[i] + sgn * step[i], lows[i]), highs[i])
                    if y[i] == x[i]:
                        continue
                    r = evaluate(n, y)
                    used += 1
                    if r < ratio:
                        x, ratio, improved = y, r, True
                        break
            if not improved:
                step = step * 0.5
        cand = _key(ratio, n, x)
        if cand < best:
            best = cand

    ratio, n, x = best
    params = _decode(n, x)
    if ratio < 1.0 - 10 * spec.abs_tol:
        _, factors = strip_ratio(params, spec)
        params["factors"] = factors
        params["seed"] = seed
        margin = factors["cone"] * factors["both"] - factors["k1"] * factors["k2"]
        return Witness(params=params, ratio=ratio, margin=margin)
    return NotFound(best=ratio, evaluations=evals, best_params=params)


def confirm_witness(witness: Witness, grid_n: int = 2000):
    """Re-evaluate a hunt witness with the brute-force Riemann oracle.

    Returns ``(ratio, factors)`` computed without the adaptive kernels.
    """
    from .conemeasure import brute_force_cone_measure

    C, t0, n, s1, s2 = witness_bodies(witness.params)
    cm = _cone_measure(C, t0, n)
    f = {
        "cone": brute_force_cone_measure(cm, WholePlane(), grid_n),
        "both": brute_force_cone_measure(cm, Intersection([s1, s2]), grid_n),
        "k1": brute_force_cone_measure(cm, s1, grid_n),
        "k2": brute_force_cone_measure(cm, s2, grid_n),
    }
    return f["cone"] * f["both"] / (f["k1"] * f["k2"]), f


# ---------------------------------------------------------------------------
# phase search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class T0Result:
    """Phase with the largest cone-inequality margin found on the grid."""

    t0: float
    margin: float
    evaluations: int
    report: InequalityReport = field(repr=False, default=None)

    def as_dict(self):
        return {"found": True, "t0": self.t0, "margin": self.margin,
                "evaluations": self.evaluations,
                "report": self.report.as_dict() if self.report else None}


def _phase_grid(intervals, grid_size):
    """Roughly ``grid_size`` uniformly spaced phases over the given intervals."""
    total = sum(b - a for a, b in intervals)
    out = []
    for a, b in intervals:
        if total == 0 or b - a == 0:
            out.append(np.array([a]))
            continue
        k = max(2, int(round(grid_size * (b - a) / total)))
        out.append(np.linspace(a, b, k))
    return np.unique(np.concatenate(out))


def find_t0(C: Cone2D, n: int, K1, K2, grid_size: int = 512,
            spec: QuadratureSpec | None = None):
    """Scan admissible phases in ``[0, pi]`` for one satisfying the cone inequality.

    Returns the phase of maximum margin (ties go to the smallest phase)
    when that margin is at least ``-spec.abs_tol``; otherwise
    :class:`NotFound`, which at finite resolution is inconclusive.

    Raises
    ------
    EmptyAdmissibleSet
        if no phase in ``[0, pi]`` keeps the angular density nonnegative.
    """
    spec = spec or default_spec()
    if grid_size < 2:
        raise DomainError(f"grid_size must be at least 2, got {grid_size}")
    if n == 2:
        intervals = [(0.0, math.pi)]
    else:
        intervals = admissible_phase_intervals(C.t_lo, C.t_hi)
    if not intervals:
        raise EmptyAdmissibleSet(
            f"no phase in [0, pi] keeps cos(t + phase) >= 0 on [{C.t_lo}, {C.t_hi}]")
    best = None
    both = intersect(K1, K2)
    grid = _phase_grid(intervals, grid_size)
    for t0 in grid:
        rep = check_cone_inequality(C, float(t0), n, K1, K2, spec, both)
        if best is None or rep.margin > best[1]:
            best = (float(t0), rep.margin, rep)
    t0, margin, rep = best
    if margin >= -spec.abs_tol:
        return T0Result(t0=t0, margin=margin, evaluations=len(grid), report=rep)
    return NotFound(best=margin, evaluations=len(grid), best_params={"t0": t0})
