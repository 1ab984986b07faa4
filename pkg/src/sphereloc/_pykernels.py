"""Pure numpy implementation of the hot kernels.

Mirrors ``_ckernels.pyx`` function for function.  The incomplete gamma
evaluation is delegated to :func:`scipy.special.gammainc`; the compiled
backend carries its own series/tail evaluation, and the test-suite checks the
two against each other.
"""
import math

import numpy as np
from scipy.special import gammainc

from ._rules import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

BACKEND = "python"

KIND_FREE = 0
KIND_SLAB = 1
KIND_DISK = 2
WEIGHT_GAUSSIAN = 0
WEIGHT_POWER = 1


def gaussian_radial(n, x):
    x = np.asarray(x, dtype=float)
    s = 0.5 * n
    total = 2.0 ** (s - 1.0) * math.gamma(s)
    with np.errstate(over="ignore", invalid="ignore"):
        out = total * gammainc(s, 0.5 * x * x)
    return np.where(np.isinf(x), total, out)


def _radial(t, kind, alpha, d):
    with np.errstate(divide="ignore"):
        slab = d[:, None] / np.abs(np.cos(t - alpha[:, None]))
    out = np.where(kind[:, None] == KIND_SLAB, slab, np.inf)
    return np.where(kind[:, None] == KIND_DISK, d[:, None], out)


def _weight(rho, weight_kind, weight_param):
    if weight_kind == WEIGHT_GAUSSIAN:
        return gaussian_radial(int(weight_param), rho)
    q = weight_param + 1.0
    return rho ** q / q


def cone_integral(pieces, theta, m, weight_kind, weight_param,
                  abs_tol, rel_tol, max_sub):
    """Integrate ``cos(t+theta)**m * W(rho(t))`` over a list of pieces.

    ``pieces`` rows are ``(lo, hi, kind, alpha, d)``; on each piece the
    radial function is smooth.  Returns ``(value, n_intervals, converged)``.
    """
    pieces = np.asarray(pieces, dtype=float).reshape(-1, 5)
    pieces = pieces[pieces[:, 1] > pieces[:, 0]]
    if pieces.shape[0] == 0:
        return 0.0, 0, True
    lo, hi, kind, alpha, d = (pieces[:, j].copy() for j in range(5))
    total_len = float(np.sum(hi - lo))
    done = 0.0
    n_intervals = lo.size
    while True:
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        t = mid[:, None] + half[:, None] * NODES[None, :]
        ang = np.cos(t + theta) ** m if m else 1.0
        y = ang * _weight(_radial(t, kind, alpha, d), weight_kind, weight_param)
        kron = half * (y @ KRONROD_WEIGHTS)
        gauss = half * (y @ GAUSS_WEIGHTS)
        err = np.abs(kron - gauss)
        target = max(abs_tol, rel_tol * abs(done + kron.sum()))
        ok = err <= target * (hi - lo) / total_len
        done += float(kron[ok].sum())
        if ok.all():
            return done, n_intervals, True
        bad = ~ok
        n_intervals += int(bad.sum())
        if n_intervals > max_sub:
            return done + float(kron[bad].sum()), n_intervals, False
        b_lo, b_hi = lo[bad], hi[bad]
        b_mid = 0.5 * (b_lo + b_hi)
        lo = np.concatenate([b_lo, b_mid])
        hi = np.concatenate([b_mid, b_hi])
        kind = np.concatenate([kind[bad], kind[bad]])
        alpha = np.concatenate([alpha[bad], alpha[bad]])
        d = np.concatenate([d[bad], d[bad]])
