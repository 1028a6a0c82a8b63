"""Pure-numpy reference implementation of the log-density reduction kernels.

Each kernel computes, per evaluation point ``i``, a log-sum-exp over a
set of reference points (quadrature nodes or mixture draws) of Gaussian
log-density terms.  Normalization constants and mixture ``-log L``
offsets are added by the caller; the kernels return bare reductions.

The compiled backend in ``_kernels_cy`` implements the same reductions;
this module is the fallback selected when the extension is unavailable.
Work is blocked so peak memory stays near ``_BLOCK_ELEMS`` doubles.
"""

from __future__ import annotations

import numpy as np
from scipy.special import i0e

_BLOCK_ELEMS = 4_000_000


def _logsumexp_rows(t):
    m = np.max(t, axis=1)
    finite = np.isfinite(m)
    out = np.where(finite, m, -np.inf)
    if np.any(finite):
        tf = t[finite] - m[finite, None]
        out[finite] += np.log(np.sum(np.exp(tf), axis=1))
    return out


def cond_quad(y1re, y1im, y2, xre, xim, ua, ub, logw,
              cph, sa, sqrho, sq1mrho, inv_cov, inv_2rec, use1, use2):
    """Quadrature reduction for log f(y1, y2 | x) over antenna-noise nodes.

    Node k contributes ``logw[k]`` plus the CD and/or ED Gaussian
    exponents evaluated at ``s = cph*x + sa*(ua[k] + 1j*ub[k])``.
    """
    n, k = len(y1re), len(ua)
    out = np.empty(n)
    block = max(1, _BLOCK_ELEMS // max(k, 1))
    for i0 in range(0, n, block):
        sl = slice(i0, min(i0 + block, n))
        sre = cph * xre[sl, None] + sa * ua[None, :]
        sim = cph * xim[sl, None] + sa * ub[None, :]
        t = np.broadcast_to(logw[None, :], sre.shape).copy()
        if use1:
            t -= ((y1re[sl, None] - sqrho * sre) ** 2
                  + (y1im[sl, None] - sqrho * sim) ** 2) * inv_cov
        if use2:
            smag = np.sqrt(sre**2 + sim**2)
            t -= (y2[sl, None] - sq1mrho * smag) ** 2 * inv_2rec
        out[sl] = _logsumexp_rows(t)
    return out


def mix_pointwise(y1re, y1im, y2, m1re, m1im, m2,
                  inv_cov, inv_2rec, use1, use2):
    """Uniform mixture reduction over per-draw means (m1, m2)."""
    n, L = len(y1re), len(m1re)
    out = np.empty(n)
    block = max(1, _BLOCK_ELEMS // max(L, 1))
    for i0 in range(0, n, block):
        sl = slice(i0, min(i0 + block, n))
        t = np.zeros((sl.stop - sl.start, L))
        if use1:
            t -= ((y1re[sl, None] - m1re[None, :]) ** 2
                  + (y1im[sl, None] - m1im[None, :]) ** 2) * inv_cov
        if use2:
            t -= (y2[sl, None] - m2[None, :]) ** 2 * inv_2rec
        out[sl] = _logsumexp_rows(t)
    return out


def mix_radial(a1, y2, rref, sqrho, sq1mrho, inv_cov, inv_2rec, use1, use2):
    """Phase-averaged mixture reduction over reference radii ``rref``.

    The CD factor of each draw is averaged exactly over the draw's
    (uniform, independent) phase, which turns the complex-Gaussian
    kernel into a Rice-type kernel in ``|y1|``:

        E_phase[CN(y1; sqrt(rho)*s, var)] =
            exp(-(|y1| - sqrt(rho)*r)^2 / var) * i0e(2*sqrt(rho)*r*|y1|/var) / (pi*var)
    """
    n, L = len(a1), len(rref)
    out = np.empty(n)
    sr = sqrho * rref
    m2 = sq1mrho * rref
    block = max(1, _BLOCK_ELEMS // max(L, 1))
    for i0 in range(0, n, block):
        sl = slice(i0, min(i0 + block, n))
        t = np.zeros((sl.stop - sl.start, L))
        if use1:
            t += (-((a1[sl, None] - sr[None, :]) ** 2) * inv_cov
                  + np.log(i0e(2.0 * inv_cov * sr[None, :] * a1[sl, None])))
        if use2:
            t -= (y2[sl, None] - m2[None, :]) ** 2 * inv_2rec
        out[sl] = _logsumexp_rows(t)
    return out
