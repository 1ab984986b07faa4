import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphereloc.errors import DomainError
from sphereloc.numerics import integrate_interval
from sphereloc.waist import (F, G, L2, Lp, Table, WaistParams, modulus, psi1, psi2,
                             tube_volume_round, waist_bound)


def chain_oracle(n, k, eps, dps=40):
    """The waist formula evaluated step by step in multiprecision (Euclidean modulus)."""
    with mp.workdps(dps):
        e = mp.mpf(eps) / 2
        delta = 1 - mp.sqrt(1 - e ** 2 / 4)
        p1 = 2 * mp.asin(e / (4 * mp.sqrt(k + 1)))
        p2 = 2 * mp.asin(e / (2 * mp.sqrt(k + 1)))
        f = mp.quad(lambda x: mp.sin(x) ** (k - 1), [p2, mp.pi / 2])
        g = mp.quad(lambda x: mp.sin(x) ** (k - 1), [0, p1])
        return 1 / (1 + (1 - 2 * delta) ** (n - k) * mp.mpf(k + 1) ** (k + 1) * f / g)


def test_modulus_examples():
    assert modulus(L2(), 0.0) == 0.0
    assert modulus(L2(), 2.0) == 1.0
    assert modulus(Lp(4), 1.0) == pytest.approx(1 - (15 / 16) ** 0.25, rel=1e-14)
    with pytest.raises(DomainError):
        modulus(L2(), 2.5)
    with pytest.raises(DomainError):
        Lp(1.5)


def test_lp_estimate_below_euclidean():
    # the l_p estimate with p > 2 never exceeds the Euclidean modulus
    for eps in np.linspace(0, 2, 41):
        assert modulus(Lp(3), eps) <= modulus(L2(), eps) + 1e-15


def test_table_modulus():
    T = Table(((0.0, 0.0), (1.0, 0.1), (2.0, 0.9)))
    assert modulus(T, 0.5) == pytest.approx(0.05)
    with pytest.raises(DomainError):
        Table(((0.0, 0.0), (1.0, 0.0)))
    with pytest.raises(DomainError):
        Table(((0.0, 0.0), (1.0, 1.2)))
    with pytest.raises(DomainError):
        modulus(Table(((0.0, 0.0), (1.0, 0.1))), 1.5)


def test_psi_examples():
    assert psi1(3, 0.0) == psi2(3, 0.0) == 0.0
    assert psi1(3, 2.0) == pytest.approx(2 * math.asin(0.25), rel=1e-15)
    assert psi1(3, 2.0) == pytest.approx(0.50536, abs=1e-5)
    for k in (1, 2, 5):
        for eps in np.linspace(0, 2 * math.sqrt(k + 1), 17):
            assert psi2(k, eps) >= psi1(k, eps)
    with pytest.raises(DomainError):
        psi2(1, 3.0)


def test_f_g_examples():
    assert F(1, 0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    for k in range(1, 8):
        assert G(k, 0.0) == 0.0
    for eps in (0.1, 0.7, 1.3):
        assert F(2, eps) == pytest.approx(math.cos(psi2(2, eps)), abs=1e-12)
        q = integrate_interval(np.sin, psi2(2, eps), math.pi / 2)
        assert F(2, eps) == pytest.approx(q, abs=1e-10)


def test_waist_examples():
    assert waist_bound(WaistParams(4, 1), 0.0) == 0.0
    assert waist_bound(WaistParams(4, 1), 1.0) == pytest.approx(float(chain_oracle(4, 1, 1.0)), abs=1e-10)
    eps = np.linspace(0, 1.8, 91)
    w = [waist_bound(WaistParams(6, 2), e) for e in eps]
    assert np.all(np.diff(w) >= 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.data())
def test_waist_against_chain_oracle(n, data):
    k = data.draw(st.integers(1, n - 1))
    eps = data.draw(st.floats(0.01, 1.8))
    assert abs(waist_bound(WaistParams(n, k), eps) - float(chain_oracle(n, k, eps))) <= 1e-10


def test_waist_range_and_positivity():
    for n in range(2, 9):
        for k in range(1, n):
            for eps in (1e-3, 0.5, 1.8):
                assert 0 < waist_bound(WaistParams(n, k, Lp(4)), eps) < 1


def test_smaller_modulus_gives_smaller_waist():
    eps_grid = np.linspace(0, 2, 21)
    big = Table(tuple((e, modulus(L2(), e)) for e in eps_grid))
    small = Table(tuple((e, 0.5 * modulus(L2(), e)) for e in eps_grid))
    for eps in (0.3, 1.0, 1.7):
        assert waist_bound(WaistParams(5, 2, small), eps) <= waist_bound(WaistParams(5, 2, big), eps)


def test_waist_rejects_inadmissible():
    with pytest.raises(DomainError):
        WaistParams(3, 3)
    with pytest.raises(DomainError):
        waist_bound(WaistParams(3, 1), -0.1)
    with pytest.raises(DomainError):
        waist_bound(WaistParams(3, 1), 4.5)


def test_tube_examples():
    for eps in (0.0, 0.3, 1.0, math.pi / 2):
        assert tube_volume_round(2, 1, eps) == pytest.approx(math.sin(eps), abs=1e-15)
    assert tube_volume_round(5, 2, 0.0) == 0.0
    assert tube_volume_round(5, 2, math.pi / 2) == 1.0
    with pytest.raises(DomainError):
        tube_volume_round(3, 1, 2.0)


@pytest.mark.parametrize("n", range(2, 9))
def test_tube_against_quadrature(n):
    for k in range(1, n + 1):
        total = integrate_interval(lambda t: np.cos(t) ** (n - k) * np.sin(t) ** (k - 1), 0, math.pi / 2)
        for eps in (0.2, 0.9, 1.4):
            part = integrate_interval(lambda t: np.cos(t) ** (n - k) * np.sin(t) ** (k - 1), 0, eps)
            assert tube_volume_round(n, k, eps) == pytest.approx(part / total, abs=1e-12)


def test_tube_complementary_identity():
    # the orthogonal complement of an equatorial S^(n-k) is a great S^(k-1),
    # whose codimension is n + 1 - k
    for n in range(2, 9):
        for k in range(1, n):
            for eps in np.linspace(0, math.pi / 2, 13):
                s = tube_volume_round(n, k, eps) + tube_volume_round(n, n + 1 - k, math.pi / 2 - eps)
                assert s == pytest.approx(1.0, abs=1e-12)


def test_complementary_identity_with_codim_n_minus_k_is_false():
    s = tube_volume_round(2, 1, 0.5) + tube_volume_round(2, 1, math.pi / 2 - 0.5)
    assert abs(s - 1.0) > 0.1


def test_waist_below_tube_l2():
    for n in range(2, 9):
        for k in range(1, n):
            for eps in np.linspace(0.01, math.pi / 2, 40):
                assert waist_bound(WaistParams(n, k), eps) <= tube_volume_round(n, k, eps) + 1e-9
