"""Seeded generators for random symmetric bodies and admissible cones."""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull

from .conemeasure import admissible_phase_intervals
from .convex2d import Cone2D, Polygon, Strip, polygon_defect

__all__ = [
    "random_symmetric_polygon", "random_strip", "random_body",
    "random_admissible_cone", "random_sandwich_polygon",
]


def _hull_polygon(points):
    hull = ConvexHull(points)
    verts = points[hull.vertices]  # counterclockwise for 2-D input
    if polygon_defect(verts) is not None:
        return None
    return Polygon(verts)


def random_symmetric_polygon(rng: np.random.Generator, half_count=(2, 8),
                             radii=(0.3, 3.0), jitter=0.8) -> Polygon:
    """Radially perturbed circle made convex.

    ``half_count`` vertices are placed at jittered uniform angles in
    ``[0, pi)`` with radii uniform in ``radii``; their antipodes are added and
    the convex hull is kept.  Draws again if the hull is degenerate.
    """
    lo, hi = half_count
    while True:
        k = int(rng.integers(lo, hi + 1))
        base = (np.arange(k) + 0.5) * math.pi / k
        ang = base + (rng.random(k) - 0.5) * jitter * math.pi / k
        r = rng.uniform(radii[0], radii[1], k)
        pts = np.c_[r * np.cos(ang), r * np.sin(ang)]
        poly = _hull_polygon(np.r_[pts, -pts])
        if poly is not None:
            return poly


def random_sandwich_polygon(rng: np.random.Generator, inner: float, outer: float,
                            half_count=(2, 6), max_tries=10_000) -> Polygon:
    """Random symmetric polygon strictly containing the ball of radius
    ``inner`` and contained in the ball of radius ``outer``.

    Vertices are drawn with radii in ``(inner, outer]``; hulls whose edges
    come within ``inner`` of the origin are rejected.
    """
    for _ in range(max_tries):
        poly = random_symmetric_polygon(rng, half_count, (inner, outer), jitter=1.0)
        rmin, rmax = poly.radial_extrema
        if rmin > inner and rmax <= outer:
            return poly
    raise RuntimeError("could not draw a sandwich-admissible polygon")


def random_strip(rng: np.random.Generator, widths=(0.05, 5.0)) -> Strip:
    """Strip with uniform normal angle and log-uniform half width."""
    w = math.exp(rng.uniform(math.log(widths[0]), math.log(widths[1])))
    return Strip(rng.uniform(0.0, math.pi), w)


def random_body(rng: np.random.Generator):
    """A random polygon or strip (equal odds)."""
    if rng.random() < 0.5:
        return random_symmetric_polygon(rng)
    return random_strip(rng)


def random_admissible_cone(rng: np.random.Generator, length=(0.1, 0.95 * math.pi)):
    """Cone together with a phase in ``[0, pi]`` keeping ``cos(t + phase) >= 0`` on it.

    Returns ``(cone, phase)``; the cone position is uniform over the positions
    compatible with the drawn phase.
    """
    L = rng.uniform(*length)
    phase = rng.uniform(0.0, math.pi)
    lo = -0.5 * math.pi - phase + rng.uniform(0.0, math.pi - L)
    cone = Cone2D(lo, lo + L)
    assert admissible_phase_intervals(cone.t_lo, cone.t_hi)
    return cone, phase
