# cython: language_level=3
"""Compiled kernels: incomplete Gaussian radial integrals and the piecewise
adaptive Gauss-Kronrod cone integral.  See ``_pykernels`` for the reference
semantics."""
import numpy as np

from libc.math cimport cos, exp, log, sqrt, erfc, tgamma, pow, fabs, isinf, INFINITY, M_PI
from libc.stdlib cimport malloc, free

from ._rules import XGK_HALF, WGK_HALF, WG_HALF

BACKEND = "cython"

DEF KIND_FREE = 0
DEF KIND_SLAB = 1
DEF KIND_DISK = 2

cdef double XGK[11]
cdef double WGK[11]
cdef double WG[5]
for _i in range(11):
    XGK[_i] = XGK_HALF[_i]
    WGK[_i] = WGK_HALF[_i]
for _i in range(5):
    WG[_i] = WG_HALF[_i]


cdef inline double ipow(double x, int m) nogil:
    cdef double r = 1.0
    while m > 0:
        if m & 1:
            r *= x
        x *= x
        m >>= 1
    return r


cdef double gauss_total(int n) nogil:
    return pow(2.0, 0.5 * n - 1.0) * tgamma(0.5 * n)


cdef double gauss_w(int n, double x, double total) nogil:
    cdef double s, z, term, acc, tail, e
    cdef int k, j
    if x <= 0.0:
        return 0.0
    if isinf(x):
        return total
    s = 0.5 * n
    z = 0.5 * x * x
    if z < s + 1.0:
        # lower incomplete gamma series, all terms positive
        term = 1.0 / s
        acc = term
        k = 1
        while k < 500:
            term *= z / (s + k)
            acc += term
            if term < acc * 1e-17:
                break
            k += 1
        return pow(2.0, s - 1.0) * exp(s * log(z) - z) * acc
    # upper tail by upward recursion T_j = x^(j-2) e^-z + (j-2) T_(j-2)
    e = exp(-z)
    if n % 2 == 1:
        tail = sqrt(0.5 * M_PI) * erfc(x / sqrt(2.0))
        j = 1
    else:
        tail = e
        j = 2
    while j < n:
        j += 2
        tail = ipow(x, j - 2) * e + (j - 2) * tail
    return total - tail


def gaussian_radial(int n, x):
    arr = np.asarray(x, dtype=float)
    flat = np.ascontiguousarray(arr.ravel())
    out = np.empty_like(flat)
    cdef double[::1] xv = flat
    cdef double[::1] ov = out
    cdef double total = gauss_total(n)
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = gauss_w(n, xv[i], total)
    return out.reshape(arr.shape)


cdef inline double integrand(double t, int kind, double alpha, double d,
                             double theta, int m, int wkind, double wparam,
                             int wn, double total) nogil:
    cdef double rho, c, w
    if kind == KIND_SLAB:
        c = fabs(cos(t - alpha))
        rho = d / c if c > 0.0 else INFINITY
    elif kind == KIND_DISK:
        rho = d
    else:
        rho = INFINITY
    if wkind == 0:
        w = gauss_w(wn, rho, total)
    else:
        w = pow(rho, wparam + 1.0) / (wparam + 1.0)
    if m == 0:
        return w
    return ipow(cos(t + theta), m) * w


cdef void gk21(double lo, double hi, int kind, double alpha, double d,
               double theta, int m, int wkind, double wparam, int wn,
               double total, double* kron, double* err) nogil:
    cdef double half = 0.5 * (hi - lo)
    cdef double mid = 0.5 * (hi + lo)
    cdef double fc = integrand(mid, kind, alpha, d, theta, m, wkind, wparam, wn, total)
    cdef double rk = WGK[10] * fc
    cdef double rg = 0.0
    cdef double f1, f2, dx
    cdef int j
    for j in range(10):
        dx = half * XGK[j]
        f1 = integrand(mid - dx, kind, alpha, d, theta, m, wkind, wparam, wn, total)
        f2 = integrand(mid + dx, kind, alpha, d, theta, m, wkind, wparam, wn, total)
        rk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            rg += WG[j // 2] * (f1 + f2)
    kron[0] = half * rk
    err[0] = fabs(half * (rk - rg))


def cone_integral(pieces, double theta, int m, int weight_kind, double weight_param,
                  double abs_tol, double rel_tol, int max_sub):
    arr = np.ascontiguousarray(np.asarray(pieces, dtype=float).reshape(-1, 5))
    cdef double[:, ::1] pv = arr
    cdef Py_ssize_t npieces = pv.shape[0]
    cdef int cap = max(max_sub, <int>npieces) * 2 + 2
    cdef double* lo = <double*>malloc(cap * sizeof(double))
    cdef double* hi = <double*>malloc(cap * sizeof(double))
    cdef int* src = <int*>malloc(cap * sizeof(int))
    cdef double* lo2 = <double*>malloc(cap * sizeof(double))
    cdef double* hi2 = <double*>malloc(cap * sizeof(double))
    cdef int* src2 = <int*>malloc(cap * sizeof(int))
    cdef double* kr = <double*>malloc(cap * sizeof(double))
    cdef double* er = <double*>malloc(cap * sizeof(double))
    cdef int npend = 0, nnext, i, p, n_intervals
    cdef int wn = <int>weight_param if weight_kind == 0 else 0
    cdef double total = gauss_total(wn) if weight_kind == 0 else 0.0
    cdef double total_len = 0.0, done = 0.0, level, target, mid
    cdef bint converged = True
    cdef int* tmpi
    cdef double* tmpd
    try:
        for i in range(npieces):
            if pv[i, 1] > pv[i, 0]:
                lo[npend] = pv[i, 0]
                hi[npend] = pv[i, 1]
                src[npend] = i
                total_len += pv[i, 1] - pv[i, 0]
                npend += 1
        n_intervals = npend
        if npend == 0:
            return 0.0, 0, True
        with nogil:
            while npend > 0:
                level = 0.0
                for i in range(npend):
                    p = src[i]
                    gk21(lo[i], hi[i], <int>pv[p, 2], pv[p, 3], pv[p, 4], theta, m,
                         weight_kind, weight_param, wn, total, &kr[i], &er[i])
                    level += kr[i]
                target = max(abs_tol, rel_tol * fabs(done + level))
                nnext = 0
                for i in range(npend):
                    if er[i] <= target * (hi[i] - lo[i]) / total_len:
                        done += kr[i]
                    else:
                        nnext += 1
                if nnext == 0:
                    break
                n_intervals += nnext
                if n_intervals > max_sub or 2 * nnext > cap:
                    for i in range(npend):
                        if er[i] > target * (hi[i] - lo[i]) / total_len:
                            done += kr[i]
                    converged = False
                    break
                nnext = 0
                for i in range(npend):
                    if er[i] > target * (hi[i] - lo[i]) / total_len:
                        mid = 0.5 * (lo[i] + hi[i])
                        lo2[nnext] = lo[i]
                        hi2[nnext] = mid
                        src2[nnext] = src[i]
                        lo2[nnext + 1] = mid
                        hi2[nnext + 1] = hi[i]
                        src2[nnext + 1] = src[i]
                        nnext += 2
                tmpd = lo; lo = lo2; lo2 = tmpd
                tmpd = hi; hi = hi2; hi2 = tmpd
                tmpi = src; src = src2; src2 = tmpi
                npend = nnext
        return done, n_intervals, converged
    finally:
        free(lo); free(hi); free(src); free(lo2); free(hi2); free(src2)
        free(kr); free(er)
