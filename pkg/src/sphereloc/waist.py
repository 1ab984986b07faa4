"""Waist lower bound for uniformly convex spaces and the round tube baseline.

The bound for a space of dimension ``n + 1`` and fibres of codimension
``k`` is

    w(eps) = 1 / (1 + (1 - 2 delta(eps/2))**(n-k) (k+1)**(k+1) F(k, eps/2) / G(k, eps/2))

with ``delta`` the modulus of convexity,
``F(k, e) = int_{psi2(e)}^{pi/2} sin(x)**(k-1)`` and
``G(k, e) = int_0^{psi1(e)} sin(x)**(k-1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import betainc

from .errors import DomainError
from .numerics import QuadratureSpec, sin_power_integral

__all__ = [
    "L2", "Lp", "Table", "Space", "WaistParams", "modulus", "psi1", "psi2",
    "F", "G", "waist_bound", "tube_volume_round",
]


@dataclass(frozen=True)
class L2:
    """Euclidean norm."""

    def delta(self, eps):
        return 1.0 - math.sqrt(max(0.0, 1.0 - eps * eps / 4.0))


@dataclass(frozen=True)
class Lp:
    """``l_p`` norm, ``p >= 2``, through the lower estimate ``1 - (1 - (eps/2)**p)**(1/p)``."""

    p: float

    def __post_init__(self):
        if not self.p >= 2:
            raise DomainError(f"Lp modulus needs p >= 2, got {self.p}")

    def delta(self, eps):
        return 1.0 - max(0.0, 1.0 - (0.5 * eps) ** self.p) ** (1.0 / self.p)


@dataclass(frozen=True)
class Table:
    """Modulus given by ``(eps, delta)`` pairs, linearly interpolated.

    Both coordinates must be strictly increasing and ``delta`` must lie in
    ``[0, 1]``; evaluation outside the tabulated range is an error.
    """

    pairs: tuple

    def __post_init__(self):
        pts = np.asarray(self.pairs, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise DomainError("table needs at least two (eps, delta) pairs")
        if np.any(np.diff(pts[:, 0]) <= 0) or np.any(np.diff(pts[:, 1]) <= 0):
            raise DomainError("table pairs must be strictly increasing in both coordinates")
        if pts[0, 1] < 0 or pts[-1, 1] > 1 or pts[0, 0] < 0 or pts[-1, 0] > 2:
            raise DomainError("table values must satisfy 0 <= eps <= 2 and 0 <= delta <= 1")
        object.__setattr__(self, "pairs", tuple(map(tuple, pts.tolist())))

    def delta(self, eps):
        x = [p[0] for p in self.pairs]
        if not x[0] <= eps <= x[-1]:
            raise DomainError(f"eps={eps} outside the tabulated range [{x[0]}, {x[-1]}]")
        return float(np.interp(eps, x, [p[1] for p in self.pairs]))


Space = Union[L2, Lp, Table]


@dataclass(frozen=True)
class WaistParams:
    n: int
    k: int
    space: Space = L2()

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise DomainError(f"need 1 <= k < n, got n={self.n}, k={self.k}")


def modulus(space: Space, eps: float) -> float:
    """Modulus of convexity ``delta(eps)`` for ``eps`` in ``[0, 2]``."""
    if not 0.0 <= eps <= 2.0:
        raise DomainError(f"eps must lie in [0, 2], got {eps}")
    return space.delta(eps)


def _psi(k, eps, denom):
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if eps < 0:
        raise DomainError(f"eps must be nonnegative, got {eps}")
    arg = eps / (denom * math.sqrt(k + 1))
    if arg > 1.0:
        raise DomainError(f"arcsin argument {arg} exceeds 1")
    return 2.0 * math.asin(arg)


def psi1(k: int, eps: float) -> float:
    return _psi(k, eps, 4.0)


def psi2(k: int, eps: float) -> float:
    return _psi(k, eps, 2.0)


def F(k: int, eps: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``sin(x)**(k-1)`` over ``[psi2(eps), pi/2]``."""
    lo = psi2(k, eps)
    if lo > 0.5 * math.pi:
        raise DomainError(f"psi2 = {lo} exceeds pi/2")
    return sin_power_integral(k - 1, lo, 0.5 * math.pi)


def G(k: int, eps: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``sin(x)**(k-1)`` over ``[0, psi1(eps)]``."""
    return sin_power_integral(k - 1, 0.0, psi1(k, eps))


def waist_bound(params: WaistParams, eps: float, spec: QuadratureSpec | None = None) -> float:
    """The waist bound at ``eps``; ``w(0) = 0`` by continuity.

    Raises
    ------
    DomainError
        when ``eps / 2`` leaves the domain of the modulus or of ``psi2``, or
        when ``1 - 2 delta(eps/2)`` turns negative.
    """
    n, k = params.n, params.k
    if eps < 0:
        raise DomainError(f"eps must be nonnegative, got {eps}")
    half = 0.5 * eps
    d = modulus(params.space, half)
    f = F(k, half)
    if eps == 0:
        return 0.0
    base = 1.0 - 2.0 * d
    if base < 0:
        raise DomainError(f"1 - 2 delta(eps/2) = {base} is negative")
    g = G(k, half)
    return 1.0 / (1.0 + base ** (n - k) * (k + 1) ** (k + 1) * f / g)


def tube_volume_round(n: int, k: int, eps: float, spec: QuadratureSpec | None = None) -> float:
    """Normalized volume of the ``eps``-neighbourhood of an equatorial ``S^(n-k)`` in ``S^n``.

    In tube coordinates the volume element is ``cos(t)**(n-k) sin(t)**(k-1)``,
    whose normalized integral over ``[0, eps]`` is the regularized
    incomplete beta function ``I_{sin(eps)**2}(k/2, (n-k+1)/2)``.  ``k = n``
    (neighbourhood of two antipodal points) is allowed.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not 0.0 <= eps <= 0.5 * math.pi:
        raise DomainError(f"eps must lie in [0, pi/2], got {eps}")
    if eps == 0.5 * math.pi:
        return 1.0
    return float(betainc(0.5 * k, 0.5 * (n - k + 1), math.sin(eps) ** 2))
