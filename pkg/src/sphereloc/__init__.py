"""Spherical localisation numerics.

Planar convex bodies and weighted cone measures, spherical needles,
Gaussian-correlation checks, cone-ratio estimates for volume products and
waist bounds for uniformly convex spaces.
"""
from ._kernels import BACKEND
from .conemeasure import (ConeMeasure2D, Gaussian, Power, brute_force_cone_measure,
                          cone_body_measure)
from .convex2d import (Cone2D, ConvexBody2D, Disk, Intersection, Polygon, Strip,
                       WholePlane, load_body, polar_dual, reference_volume_product)
from .errors import *  # noqa: F401,F403
from .gcc import (check_cone_inequality, check_full_correlation_2d, find_t0,
                  hunt_strip_counterexample, needle_cone_consistency, sector_function)
from .mahler import (AlphaSearchConfig, alpha_estimate, alpha_for_body, alpha_term,
                     mahler_bound)
from .needle import (NeedleDensity, meridian_fubini_check, needle_integrate,
                     needle_normalize, sphere_integrate)
from .numerics import QuadratureSpec, gaussian_radial_integral, integrate_interval
from .reports import InequalityReport, NotFound, Witness
from .waist import L2, Lp, Table, WaistParams, tube_volume_round, waist_bound

__version__ = "0.1.0"
