import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphereloc import _rules
from sphereloc.errors import DomainError, NonIntegrable, SubdivisionLimit
from sphereloc.numerics import (QuadratureSpec, default_spec, gaussian_radial_integral,
                                gaussian_radial_total, integrate_interval,
                                power_radial_integral, sin_power_integral)


def test_kronrod_rule_exact_to_degree_31():
    x, wk, wg = _rules.NODES, _rules.KRONROD_WEIGHTS, _rules.GAUSS_WEIGHTS
    for deg in range(32):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert abs(np.dot(wk, x ** deg) - exact) < 1e-14
        if deg < 20:
            assert abs(np.dot(wg, x ** deg) - exact) < 1e-14


@pytest.mark.parametrize("f, a, b, expected", [
    (lambda x: 0.0 * x, 0.0, 1.0, 0.0),
    (lambda x: 1.0, 0.0, math.pi, math.pi),
    (lambda x: np.sin(x) ** 3, 0.0, math.pi / 2, 2.0 / 3.0),
    (lambda x: np.exp(-x * x), -3.0, 3.0, math.sqrt(math.pi) * math.erf(3.0)),
])
def test_integrate_interval_examples(f, a, b, expected):
    assert integrate_interval(f, a, b) == pytest.approx(expected, abs=1e-10)


def test_integrate_interval_with_kink_breakpoint():
    f = lambda x: np.abs(x - 0.3)
    assert integrate_interval(f, 0.0, 1.0, points=[0.3]) == pytest.approx(0.045 + 0.245, abs=1e-14)


def test_integrate_interval_errors():
    with pytest.raises(DomainError):
        integrate_interval(np.sin, 1.0, 0.0)
    tiny = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=4)
    with pytest.raises(SubdivisionLimit):
        integrate_interval(lambda x: np.sqrt(np.abs(np.sin(40 * x))), 0.0, 10.0, tiny)


def test_spec_validation_and_env(monkeypatch):
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)
    monkeypatch.setenv("SPHERELOC_ABS_TOL", "1e-12")
    assert default_spec().abs_tol == 1e-12
    assert QuadratureSpec().tightened().abs_tol == pytest.approx(1e-11)


_poly = st.lists(st.floats(-3, 3), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(_poly, _poly, st.floats(-2, 2), st.floats(-2, 2))
def test_linearity(p, q, alpha, beta):
    f = lambda x: np.polynomial.polynomial.polyval(x, p)
    g = lambda x: np.polynomial.polynomial.polyval(x, q)
    lhs = integrate_interval(lambda x: alpha * f(x) + beta * g(x), -1.0, 2.0)
    rhs = alpha * integrate_interval(f, -1.0, 2.0) + beta * integrate_interval(g, -1.0, 2.0)
    assert abs(lhs - rhs) <= 2e-10 * max(1.0, abs(lhs))


@settings(max_examples=40, deadline=None)
@given(st.floats(-2, 0), st.floats(0, 1), st.floats(1, 3))
def test_interval_additivity(a, b, c):
    f = lambda x: np.cos(3 * x) * np.exp(x)
    whole = integrate_interval(f, a, c)
    assert abs(integrate_interval(f, a, b) + integrate_interval(f, b, c) - whole) <= 2e-10


@pytest.mark.parametrize("m, a, b, expected", [
    (0, 0.0, math.pi / 2, math.pi / 2),
    (1, 0.0, math.pi, 2.0),
    (2, 0.0, math.pi, math.pi / 2),
    (3, 0.0, math.pi / 2, 2.0 / 3.0),
])
def test_sin_power_examples(m, a, b, expected):
    assert sin_power_integral(m, a, b) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("m", range(0, 15))
def test_sin_power_symmetry_and_quadrature(m):
    full = sin_power_integral(m, 0.0, math.pi)
    assert full == pytest.approx(2 * sin_power_integral(m, 0.0, math.pi / 2), rel=1e-14)
    q = integrate_interval(lambda x: np.sin(x) ** m, 0.3, 2.9)
    assert sin_power_integral(m, 0.3, 2.9) == pytest.approx(q, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.floats(0, math.pi), st.floats(-12, 0.4))
def test_sin_power_relative_accuracy_short_intervals(m, a, log_len):
    b = min(a + 10 ** log_len, math.pi)
    mp.mp.dps = 40
    # rescale so the quadrature works with O(1) values
    lo, hi = mp.mpf(a), mp.mpf(b)
    scale = max(abs(mp.sin((lo + hi) / 2)) ** m, mp.mpf(10) ** -300)
    exact = scale * mp.quad(lambda x: mp.sin(x) ** m / scale, [lo, hi])
    if exact == 0:
        return
    got = sin_power_integral(m, a, b)
    assert abs(got - float(exact)) <= 1e-11 * float(abs(exact)) + 1e-300


def test_sin_power_rejects_outside_range():
    with pytest.raises(DomainError):
        sin_power_integral(2, -0.5, 1.0)
    with pytest.raises(DomainError):
        sin_power_integral(-1, 0.0, 1.0)


def test_gaussian_radial_examples():
    assert gaussian_radial_integral(2, math.inf) == pytest.approx(1.0, abs=1e-15)
    assert gaussian_radial_integral(2, math.sqrt(2 * math.log(2))) == pytest.approx(0.5, abs=1e-15)
    assert gaussian_radial_integral(1, math.inf) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-15)


@pytest.mark.parametrize("n", range(1, 11))
def test_gaussian_radial_against_mpmath(n):
    mp.mp.dps = 30
    for x in (0.0, 1e-3, 0.4, 1.0, 2.5, 5.0, 9.0, 40.0):
        x = mp.mpf(x)
        exact = mp.mpf(2) ** (mp.mpf(n) / 2 - 1) * mp.gammainc(mp.mpf(n) / 2, 0, x * x / 2)
        x = float(x)
        got = gaussian_radial_integral(n, x)
        assert abs(got - float(exact)) <= 1e-13 * max(float(exact), 1e-300) + 1e-300


def test_gaussian_radial_monotone_and_bounded():
    x = np.linspace(0, 12, 500)
    for n in (1, 3, 7):
        v = gaussian_radial_integral(n, x)
        assert np.all(np.diff(v) >= 0)
        assert np.all(np.diff(v[:200]) > 0)  # below saturation in double precision
        assert np.all(v <= gaussian_radial_total(n) * (1 + 1e-15))


def test_gaussian_radial_rejects_bad_input():
    with pytest.raises(DomainError):
        gaussian_radial_integral(0, 1.0)
    with pytest.raises(DomainError):
        gaussian_radial_integral(2, -1.0)


@pytest.mark.parametrize("p, upper, expected", [(0, 3, 3), (2, 1, 1 / 3), (4, 2, 32 / 5)])
def test_power_radial_examples(p, upper, expected):
    assert power_radial_integral(p, upper) == pytest.approx(expected, rel=1e-15)


def test_power_radial_infinite_upper():
    with pytest.raises(NonIntegrable):
        power_radial_integral(2, math.inf)
