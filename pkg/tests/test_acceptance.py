"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with a short measurement summary; the
lines are printed together at the end of the run (see ``conftest.py``).
Tolerances are the contract values and are never relaxed here.
"""
import io
import json
import math
import time

import numpy as np
import pytest

from sphereloc.cli import dumps, run
from sphereloc.conemeasure import (ConeMeasure2D, Power, brute_force_cone_measure,
                                   cone_body_measure)
from sphereloc.convex2d import (Cone2D, Disk, Strip, polar_dual, reference_volume_product,
                                vertex_hausdorff)
from sphereloc.gcc import (T0Result, check_full_correlation_2d, confirm_witness, find_t0,
                           hunt_strip_counterexample, needle_cone_consistency)
from sphereloc.mahler import alpha_estimate, alpha_term, mahler_bound
from sphereloc.needle import SPHERE_FUNCTIONS, meridian_fubini_check, sphere_function
from sphereloc.reports import Witness
from sphereloc.sampling import (random_admissible_cone, random_strip,
                                random_symmetric_polygon)
from sphereloc.waist import L2, Lp, WaistParams, tube_volume_round, waist_bound

from _instances import cli_command_lines, gcc_instance, oracle_instance, write_bodies
from test_waist import chain_oracle

SEED = 20240601
RESULTS = {}


def record(number, ok, detail):
    RESULTS[number] = (bool(ok), detail)
    assert ok, f"criterion {number}: {detail}"


def test_01_fubini_consistency():
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3):
        for name in SPHERE_FUNCTIONS:
            rep = meridian_fubini_check(n, sphere_function(name, n, seed=SEED))
            worst = max(worst, rep.margin)
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-6 and elapsed < 60,
           f"worst margin {worst:.2e} over {2 * len(SPHERE_FUNCTIONS)} checks, {elapsed:.1f} s")


def test_02_polar_involution():
    rng = np.random.default_rng(SEED)
    t = np.linspace(0, 2 * math.pi, 360, endpoint=False)
    worst_h = worst_r = 0.0
    for _ in range(200):
        K = random_symmetric_polygon(rng, half_count=(2, 16))
        D = polar_dual(K)
        worst_h = max(worst_h, vertex_hausdorff(polar_dual(D).vertices, K.vertices))
        worst_r = max(worst_r, float(np.max(np.abs(D.radial_function(t) * K.support_function(t) - 1))))
    record(2, worst_h <= 1e-9 and worst_r <= 1e-10,
           f"max Hausdorff {worst_h:.2e}, max |rho*h - 1| {worst_r:.2e}")


def test_03_cone_measure_oracle():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(50):
        cm, K = oracle_instance(rng)
        worst = max(worst, abs(cone_body_measure(cm, K) - brute_force_cone_measure(cm, K, 2000)))
    worst_add = worst_scale = 0.0
    for _ in range(50):
        cm, K = oracle_instance(rng)
        lo, hi = cm.cone.t_lo, cm.cone.t_hi
        mid = lo + float(rng.uniform(0.05, 0.95)) * (hi - lo)
        parts = (cone_body_measure(cm.with_cone(Cone2D(lo, mid)), K)
                 + cone_body_measure(cm.with_cone(Cone2D(mid, hi)), K))
        worst_add = max(worst_add, abs(parts - cone_body_measure(cm, K)))
        p = float(rng.uniform(0, 4))
        pm = ConeMeasure2D(cm.cone, cm.phase, cm.exponent, Power(p))
        lam = float(rng.uniform(0.2, 5))
        base = cone_body_measure(pm, K)
        worst_scale = max(worst_scale,
                          abs(cone_body_measure(pm, K.scaled(lam)) / (lam ** (p + 1) * base) - 1))
    record(3, worst <= 1e-4 and worst_add <= 2e-10 and worst_scale <= 1e-10,
           f"oracle {worst:.2e}, additivity {worst_add:.2e}, scaling {worst_scale:.2e}")


def test_04_disk_alpha():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n in range(2, 7):
        for _ in range(20):
            C, theta = random_admissible_cone(rng, length=(0.05, math.pi - 0.05))
            R = float(rng.uniform(1.0 + 1e-6, math.sqrt(n + 1)))
            worst = max(worst, abs(alpha_term(n, theta, C, Disk(R)) - 1 / (n + 1) ** 2))
    record(4, worst <= 1e-8, f"max deviation {worst:.2e} over 100 instances")


def test_05_ball_chain():
    worst = 0.0
    for n in (4, 5, 6):
        b = mahler_bound(n, 1 / n ** 2).bound
        exact = math.pi ** n / math.gamma(n / 2 + 1) ** 2
        worst = max(worst, abs(b / exact - 1), abs(b / reference_volume_product("ball", n) - 1))
    record(5, worst <= 1e-8, f"max relative deviation {worst:.2e}")


def test_06_mahler_sanity():
    start = time.perf_counter()
    lines, ok = [], True
    for n in (4, 5):
        est = alpha_estimate(n - 1)
        bound = mahler_bound(n, est.value).bound
        cube = reference_volume_product("cube", n)
        ok &= est.value <= 1 / n ** 2 + 1e-8 and bound <= cube * (1 + 1e-6)
        lines.append(f"n={n}: alpha {est.value:.5f} <= {1 / n ** 2:.5f}, bound {bound:.4f} <= {cube:.4f}")
    elapsed = time.perf_counter() - start
    record(6, ok and elapsed < 300, "; ".join(lines) + f"; {elapsed:.0f} s")


def test_07_waist():
    grid = np.linspace(0, 1.8, 91)
    ok_zero = ok_mono = True
    worst_tube = -math.inf
    for n in range(2, 9):
        for k in range(1, n):
            for space in (L2(), Lp(4)):
                w = np.array([waist_bound(WaistParams(n, k, space), e) for e in grid])
                ok_zero &= w[0] == 0.0
                ok_mono &= bool(np.all(np.diff(w) >= 0))
                if isinstance(space, L2):
                    # beyond pi/2 the neighbourhood is the whole sphere
                    tube = np.array([tube_volume_round(n, k, min(e, math.pi / 2)) for e in grid])
                    worst_tube = max(worst_tube, float(np.max(w - tube)))
    rng = np.random.default_rng(SEED)
    worst_oracle = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n))
        eps = float(rng.uniform(0.01, 1.8))
        worst_oracle = max(worst_oracle, abs(waist_bound(WaistParams(n, k), eps) - float(chain_oracle(n, k, eps))))
    record(7, ok_zero and ok_mono and worst_tube <= 1e-9 and worst_oracle <= 1e-10,
           f"w(0)=0 {ok_zero}, monotone {ok_mono}, max(w - tube) {worst_tube:.2e}, "
           f"oracle {worst_oracle:.2e}")


def test_08_tube_identities():
    worst = 0.0
    for n in range(2, 9):
        for k in range(1, n):
            worst = max(worst, abs(tube_volume_round(n, k, math.pi / 2) - 1),
                        abs(tube_volume_round(n, k, 0.0)))
            for eps in np.linspace(0, math.pi / 2, 25):
                # complement of the eps-tube around S^(n-k) is the tube around S^(k-1)
                s = tube_volume_round(n, k, eps) + tube_volume_round(n, n + 1 - k, math.pi / 2 - eps)
                worst = max(worst, abs(s - 1))
    record(8, worst <= 1e-10, f"max identity residual {worst:.2e} (complement codimension n+1-k)")


def test_09_full_correlation():
    rng = np.random.default_rng(SEED)
    worst = math.inf
    for _ in range(500):
        worst = min(worst, check_full_correlation_2d(random_strip(rng), random_strip(rng)).margin)
    perp = 0.0
    for _ in range(20):
        a = float(rng.uniform(0, math.pi))
        s1, s2 = Strip(a, float(rng.uniform(0.05, 5))), Strip(a + math.pi / 2, float(rng.uniform(0.05, 5)))
        perp = max(perp, abs(check_full_correlation_2d(s1, s2).margin))
    record(9, worst >= -1e-10 and perp <= 1e-9,
           f"min margin {worst:.3e} over 500 pairs, perpendicular |margin| <= {perp:.2e}")


def test_10_needle_cone_translation():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        worst = max(worst, needle_cone_consistency(*gcc_instance(rng)).margin)
    record(10, worst <= 1e-8, f"max relative margin {worst:.2e} over 100 instances")


@pytest.mark.slow
def test_11_strip_hunt():
    res = hunt_strip_counterexample(seed=SEED)
    if not isinstance(res, Witness):
        record(11, False, f"NotFound, minimum ratio {res.best:.6f}")
    brute, _ = confirm_witness(res, grid_n=2000)
    p = res.params
    record(11, res.ratio < 1 - 1e-3 and brute < 1 - 1e-3,
           f"ratio {res.ratio:.3e}, brute force {brute:.3e} (n={p['n']}, t0={p['t0']:.4f}, "
           f"cone=[{p['cone'][0]:.4f}, {p['cone'][1]:.4f}], half widths {p['half_widths']})")


def test_12_t0_existence():
    rng = np.random.default_rng(SEED)
    flagged = []
    for i in range(200):
        C, _, n, K1, K2 = gcc_instance(rng, (3, 6))
        res = find_t0(C, n, K1, K2, grid_size=512)
        margin = res.margin if isinstance(res, T0Result) else res.best
        if margin < -1e-9:
            flagged.append((i, n, margin))
    detail = f"{200 - len(flagged)}/200 satisfied"
    if flagged:
        shown = ", ".join(f"#{i} (n={n}, best margin {m:.3e})" for i, n, m in flagged[:6])
        detail += f"; flagged instances: {shown}" + (" ..." if len(flagged) > 6 else "")
    record(12, not flagged, detail)


def test_13_cli_determinism(tmp_path):
    bodies = write_bodies(tmp_path)
    mismatched = []
    for argv in cli_command_lines(bodies):
        payloads = []
        for _ in range(2):
            out = io.StringIO()
            run(argv, stdout=out, stderr=io.StringIO())
            payloads.append(dumps(json.loads(out.getvalue())["results"]))
        if payloads[0] != payloads[1]:
            mismatched.append(argv[0])
    record(13, not mismatched,
           f"{len(cli_command_lines(bodies))} invocations, mismatched: {mismatched or 'none'}")
