import math

import numpy as np
import pytest

from sphereloc.conemeasure import ConeMeasure2D, Gaussian, brute_force_cone_measure
from sphereloc.convex2d import Cone2D, Disk, Intersection, Strip, WholePlane, square
from sphereloc.errors import DivisionByZero, EmptyAdmissibleSet
from sphereloc.gcc import (T0Result, check_cone_inequality, check_full_correlation_2d,
                           cone_factors, confirm_witness, find_t0, gaussian_measure_2d,
                           hunt_strip_counterexample, needle_cone_consistency,
                           sector_function, strip_ratio)
from sphereloc.numerics import QuadratureSpec
from sphereloc.reports import NotFound, Witness
from sphereloc.sampling import random_strip, random_symmetric_polygon

from _instances import gcc_instance


def test_sector_function_examples():
    assert sector_function(WholePlane(), 2, 0.7) == pytest.approx(1.0, abs=1e-15)
    assert sector_function(Disk(0.0), 2, 0.7) == 0.0
    assert sector_function(Strip(0.0, 1.0), 2, 0.0) == pytest.approx(1 - math.exp(-0.5), rel=1e-14)


@pytest.mark.parametrize("angle, w", [(0.0, 0.5), (1.1, 1.0), (2.9, 2.2)])
def test_strip_gaussian_measure_closed_form(angle, w):
    assert gaussian_measure_2d(Strip(angle, w)) == pytest.approx(math.erf(w / math.sqrt(2)), abs=1e-12)


def test_perpendicular_strips_are_independent():
    for w1, w2 in ((0.3, 1.2), (1.0, 1.0), (2.0, 0.1)):
        rep = check_full_correlation_2d(Strip(0.4, w1), Strip(0.4 + math.pi / 2, w2))
        assert abs(rep.margin) <= 1e-9


def test_full_correlation_same_body():
    K = random_symmetric_polygon(np.random.default_rng(1))
    rep = check_full_correlation_2d(K, K)
    g = rep.params["gamma_k1"]
    assert rep.margin == pytest.approx(g - g * g, abs=1e-12) and rep.holds


def test_full_correlation_monte_carlo_oracle():
    rng = np.random.default_rng(77)
    pts = np.random.default_rng(78).standard_normal((1_000_000, 2))
    for _ in range(3):
        s1, s2 = random_strip(rng), random_strip(rng)
        rep = check_full_correlation_2d(s1, s2)
        inside = lambda s: np.abs(pts @ np.array([math.cos(s.normal_angle), math.sin(s.normal_angle)])) <= s.half_width
        a, b = inside(s1), inside(s2)
        # binomial standard error at 1e6 samples is below 5e-4
        assert abs(np.mean(a & b) - rep.lhs) <= 2.5e-3
        assert abs(np.mean(a) * np.mean(b) - rep.rhs) <= 2.5e-3


def test_cone_inequality_trivial_cases():
    C = Cone2D(-0.6, 0.6)
    rep = check_cone_inequality(C, 0.0, 4, WholePlane(), WholePlane())
    assert abs(rep.margin) <= rep.tolerance
    K = random_symmetric_polygon(np.random.default_rng(2))
    rep = check_cone_inequality(C, 0.0, 4, WholePlane(), K)
    assert abs(rep.margin) <= rep.tolerance


def test_cone_factors_against_brute_force():
    rng = np.random.default_rng(12)
    C = Cone2D(-0.6, 0.6)
    K1 = random_symmetric_polygon(rng, radii=(0.3, 2.0))
    K2 = random_symmetric_polygon(rng, radii=(0.3, 2.0))
    f = cone_factors(C, 0.0, 4, K1, K2)
    cm = ConeMeasure2D(C, 0.0, 2, Gaussian(4))
    oracle = {"cone": WholePlane(), "both": Intersection([K1, K2]), "k1": K1, "k2": K2}
    for name, body in oracle.items():
        assert abs(f[name] - brute_force_cone_measure(cm, body, 1000)) <= 1e-4


def test_cone_inequality_rotation_invariance():
    rng = np.random.default_rng(5)
    for _ in range(5):
        C, t0, n, K1, K2 = gcc_instance(rng)
        beta = 0.3 if t0 >= 0.3 else -0.3
        a = check_cone_inequality(C, t0, n, K1, K2)
        b = check_cone_inequality(C.rotated(beta), t0 - beta, n, K1.rotated(beta), K2.rotated(beta))
        assert b.lhs == pytest.approx(a.lhs, rel=1e-9, abs=1e-13)
        assert b.rhs == pytest.approx(a.rhs, rel=1e-9, abs=1e-13)


def test_needle_consistency_trivial_and_random():
    rep = needle_cone_consistency(Cone2D(-0.5, 0.5), 0.2, 4, WholePlane(), WholePlane())
    assert rep.lhs == pytest.approx(1.0, abs=1e-12) and rep.rhs == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(21)
    for _ in range(10):
        rep = needle_cone_consistency(*gcc_instance(rng))
        assert rep.margin <= 1e-8


def test_needle_consistency_zero_factor():
    with pytest.raises(DivisionByZero):
        needle_cone_consistency(Cone2D(-0.5, 0.5), 0.2, 4, Disk(0.0), square(1.0))


def test_hunt_empty_budget():
    res = hunt_strip_counterexample(budget=0)
    assert isinstance(res, NotFound) and res.evaluations == 0


def test_hunt_small_budget_is_reproducible():
    a = hunt_strip_counterexample(seed=7, budget=600)
    b = hunt_strip_counterexample(seed=7, budget=600)
    assert a.as_dict() == b.as_dict()


def test_witness_survives_tighter_quadrature():
    res = hunt_strip_counterexample(seed=7, budget=2000)
    assert isinstance(res, Witness) and res.ratio < 1
    tight = QuadratureSpec().tightened()
    ratio, _ = strip_ratio(res.params, tight)
    assert ratio < 1 and ratio == pytest.approx(res.ratio, rel=1e-6)
    brute, _ = confirm_witness(res, grid_n=800)
    assert brute < 1


def test_find_t0_whole_plane():
    C = Cone2D(-0.5, 0.5)
    res = find_t0(C, 4, WholePlane(), WholePlane(), grid_size=64)
    assert isinstance(res, T0Result)
    assert res.t0 == 0.0 and abs(res.margin) <= 1e-9


def test_find_t0_rejects_wide_cone():
    with pytest.raises(EmptyAdmissibleSet):
        find_t0(Cone2D(0.0, 3.5), 4, square(1.0), square(2.0))


def test_find_t0_random_instance():
    rng = np.random.default_rng(3)
    C, _, n, K1, K2 = gcc_instance(rng)
    res = find_t0(C, n, K1, K2, grid_size=64)
    rep = check_cone_inequality(C, res.t0, n, K1, K2) if isinstance(res, T0Result) else None
    if rep is not None:
        assert rep.margin == pytest.approx(res.margin, abs=1e-15)
