"""Compare the compiled and numpy kernels on representative workloads.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Prints one
line per (kernel, backend) with the median time per call and, for the
compiled backend, the speedup and the largest deviation from the numpy
result.
"""
import argparse
import statistics
import time

import numpy as np

from sphereloc import _kernels
from sphereloc.convex2d import Intersection, Strip
from sphereloc.sampling import random_symmetric_polygon


def _time(fn, repeat):
    runs = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t)
    return statistics.median(runs), out


def workloads(rng):
    x = np.abs(rng.standard_normal(10_000)) * 3
    poly = random_symmetric_polygon(rng, half_count=(8, 16))
    strips = Intersection([Strip(0.3, 0.4), Strip(1.9, 1.2)])
    yield "gaussian_radial n=5, 1e4 points", lambda k: k.gaussian_radial(5, x)
    yield "cone_integral polygon, gaussian n=6, m=4", lambda k: k.cone_integral(
        poly.pieces(-1.2, 0.9), 0.4, 4, _kernels.WEIGHT_GAUSSIAN, 6.0, 1e-12, 1e-11, 4000)[0]
    yield "cone_integral polygon, power p=4, m=3", lambda k: k.cone_integral(
        poly.pieces(-1.2, 0.9), 0.4, 3, _kernels.WEIGHT_POWER, 4.0, 1e-12, 1e-11, 4000)[0]
    yield "cone_integral two strips, gaussian n=8, m=6", lambda k: k.cone_integral(
        strips.pieces(-2.0, 0.3), 1.2, 6, _kernels.WEIGHT_GAUSSIAN, 8.0, 1e-12, 1e-11, 4000)[0]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy backend is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'workload':<48} {'backend':<8} {'median':>12} {'speedup':>8} {'max dev':>10}")
    for name, fn in workloads(rng):
        base_t, base = _time(lambda: fn(backends["python"]), args.repeat)
        print(f"{name:<48} {'python':<8} {base_t * 1e6:>10.1f}us {'':>8} {'':>10}")
        if "cython" in backends:
            t, out = _time(lambda: fn(backends["cython"]), args.repeat)
            dev = float(np.max(np.abs(np.asarray(out) - np.asarray(base))))
            print(f"{name:<48} {'cython':<8} {t * 1e6:>10.1f}us {base_t / t:>7.1f}x {dev:>10.2e}")


if __name__ == "__main__":
    main()
