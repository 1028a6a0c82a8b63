# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled log-density reduction kernels (hot loops of the MC estimator).

Same reductions as ``_kernels_py``; see that module for the contract.
All kernels release the GIL so batches can run on a thread pool.
"""

from libc.math cimport exp, log, sqrt, INFINITY
from libc.stdlib cimport free, malloc

import numpy as np

from scipy.special.cython_special cimport i0e

# Terms more than _CUT nats below the row maximum are dropped; with at
# most ~2**21 reference points the relative error stays below 1e-13.
cdef double _CUT = 60.0
cdef double _SKIP = 46.0


cdef inline Py_ssize_t _lower_bound(const double[::1] a, double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _finish_row(double* buf, Py_ssize_t n, double m) noexcept nogil:
    """Second pass: sum exp(buf - m) over entries within _SKIP of the max."""
    cdef double acc = 0.0
    cdef Py_ssize_t j
    if m == -INFINITY:
        return -INFINITY
    for j in range(n):
        if buf[j] > m - _SKIP:
            acc += exp(buf[j] - m)
    return m + log(acc)


def cond_quad(const double[::1] y1re, const double[::1] y1im, const double[::1] y2,
              const double[::1] xre, const double[::1] xim,
              const double[::1] ua, const double[::1] ub, const double[::1] logw,
              double cph, double sa, double sqrho, double sq1mrho,
              double inv_cov, double inv_2rec, bint use1, bint use2):
    cdef Py_ssize_t n = y1re.shape[0], k = ua.shape[0]
    cdef Py_ssize_t i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double* buf = <double*> malloc(k * sizeof(double))
    cdef double* sre0 = <double*> malloc(k * sizeof(double))
    cdef double* sim0 = <double*> malloc(k * sizeof(double))
    if buf == NULL or sre0 == NULL or sim0 == NULL:
        free(buf); free(sre0); free(sim0)
        raise MemoryError
    cdef double m, t, sre, sim, d1r, d1i, e2, cxr, cxi
    with nogil:
        for j in range(k):
            sre0[j] = sa * ua[j]
            sim0[j] = sa * ub[j]
        for i in range(n):
            cxr = cph * xre[i]
            cxi = cph * xim[i]
            m = -INFINITY
            for j in range(k):
                sre = cxr + sre0[j]
                sim = cxi + sim0[j]
                t = logw[j]
                if use1:
                    d1r = y1re[i] - sqrho * sre
                    d1i = y1im[i] - sqrho * sim
                    t -= (d1r * d1r + d1i * d1i) * inv_cov
                if use2:
                    e2 = y2[i] - sq1mrho * sqrt(sre * sre + sim * sim)
                    t -= e2 * e2 * inv_2rec
                buf[j] = t
                if t > m:
                    m = t
            out[i] = _finish_row(buf, k, m)
    free(buf); free(sre0); free(sim0)
    return out_arr


def mix_pointwise(const double[::1] y1re, const double[::1] y1im, const double[::1] y2,
                  const double[::1] m1re, const double[::1] m1im, const double[::1] m2,
                  double inv_cov, double inv_2rec, bint use1, bint use2):
    cdef Py_ssize_t n = y1re.shape[0], L = m1re.shape[0]
    cdef Py_ssize_t i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double* buf = <double*> malloc(L * sizeof(double))
    if buf == NULL:
        raise MemoryError
    cdef double m, t, d1r, d1i, e2
    with nogil:
        for i in range(n):
            m = -INFINITY
            for j in range(L):
                t = 0.0
                if use1:
                    d1r = y1re[i] - m1re[j]
                    d1i = y1im[i] - m1im[j]
                    t -= (d1r * d1r + d1i * d1i) * inv_cov
                if use2:
                    e2 = y2[i] - m2[j]
                    t -= e2 * e2 * inv_2rec
                buf[j] = t
                if t > m:
                    m = t
            out[i] = _finish_row(buf, L, m)
    free(buf)
    return out_arr


def mix_radial(const double[::1] a1, const double[::1] y2, const double[::1] rref,
               double sqrho, double sq1mrho, double inv_cov, double inv_2rec,
               bint use1, bint use2):
    """Phase-averaged mixture reduction; ``rref`` must be sorted ascending.

    Per row the Gaussian exponents form a parabola in r, so only radii
    within sqrt(_CUT/alpha) of its vertex can reach the row maximum
    (log i0e is nonpositive and drops out of the upper bound); the rest
    are skipped via binary search.
    """
    cdef Py_ssize_t n = a1.shape[0], L = rref.shape[0]
    cdef Py_ssize_t i, j, j0, j1
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double* buf = <double*> malloc(L * sizeof(double))
    if buf == NULL:
        raise MemoryError
    cdef double alpha = 0.0
    if use1:
        alpha += sqrho * sqrho * inv_cov
    if use2:
        alpha += sq1mrho * sq1mrho * inv_2rec
    cdef double m, t, d, rhat, w, sr
    with nogil:
        # alpha == 0 (a stream flag paired with its vanished coefficient)
        # makes every term constant in r: reduce over the full range
        w = sqrt(_CUT / alpha) if alpha > 0.0 else INFINITY
        for i in range(n):
            rhat = 0.0
            if alpha > 0.0:
                if use1:
                    rhat += sqrho * a1[i] * inv_cov
                if use2:
                    rhat += sq1mrho * y2[i] * inv_2rec
                rhat /= alpha
            j0 = _lower_bound(rref, rhat - w)
            j1 = _lower_bound(rref, rhat + w)
            if j0 == j1:
                # window empty: keep the nearest radius so the dominant
                # term is still represented
                if j0 > 0:
                    j0 -= 1
                if j1 < L:
                    j1 += 1
            m = -INFINITY
            for j in range(j0, j1):
                t = 0.0
                sr = sqrho * rref[j]
                if use1:
                    d = a1[i] - sr
                    t += -d * d * inv_cov + log(i0e(2.0 * inv_cov * sr * a1[i]))
                if use2:
                    d = y2[i] - sq1mrho * rref[j]
                    t -= d * d * inv_2rec
                buf[j - j0] = t
                if t > m:
                    m = t
            out[i] = _finish_row(buf, j1 - j0, m)
    free(buf)
    return out_arr
