"""Compiled hot loops: orbit averaging windows and resonance-order scans.

Everything here is scalar numba code (no SIMD batching), so a lane's result
never depends on what else is in its batch; sweeps are therefore bitwise
reproducible at any thread count and chunk size.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True, nogil=True)
def wb_two_windows(x1, x2, y, delta, eps, gamma, beta, fa, fb, fc, w, T, y_limit):
    """Two consecutive weighted windows of the frequency observable.

    Returns (w1o1, w1o2, w2o1, w2o2, diverged): the weighted averages of both
    components of Omega(y_t) over iterates 0..T-1 and T..2T-1.  Accumulation
    is plain summation in ascending t.
    """
    s11 = 0.0
    s12 = 0.0
    s21 = 0.0
    s22 = 0.0
    o1 = y + gamma
    o2 = -delta + beta * y * y
    for t in range(T):
        wt = w[t]
        s11 += wt * o1
        s12 += wt * o2
        f = (-fa * math.sin(TWO_PI * x1) - fb * math.sin(TWO_PI * x2)
             - fc * math.sin(TWO_PI * (x1 - x2)))
        y = y + eps * f
        if not (abs(y) <= y_limit):
            return np.nan, np.nan, np.nan, np.nan, True
        o1 = y + gamma
        o2 = -delta + beta * y * y
        x1 = (x1 + o1) % 1.0
        x2 = (x2 + o2) % 1.0
    for t in range(T):
        wt = w[t]
        s21 += wt * o1
        s22 += wt * o2
        f = (-fa * math.sin(TWO_PI * x1) - fb * math.sin(TWO_PI * x2)
             - fc * math.sin(TWO_PI * (x1 - x2)))
        y = y + eps * f
        if not (abs(y) <= y_limit):
            return np.nan, np.nan, np.nan, np.nan, True
        o1 = y + gamma
        o2 = -delta + beta * y * y
        x1 = (x1 + o1) % 1.0
        x2 = (x2 + o2) % 1.0
    return s11, s12, s21, s22, False


@njit(cache=True, nogil=True)
def wb_two_windows_batch(x10, x20, y0, delta, eps, gamma, beta, fa, fb, fc,
                         w, T, y_limit, out):
    """Run :func:`wb_two_windows` for every lane; out has shape (n, 5)."""
    n = y0.shape[0]
    for i in range(n):
        a, b_, c_, d, div = wb_two_windows(
            x10[i], x20[i], y0[i], delta[i], eps[i],
            gamma, beta, fa, fb, fc, w, T, y_limit)
        out[i, 0] = a
        out[i, 1] = b_
        out[i, 2] = c_
        out[i, 3] = d
        out[i, 4] = 1.0 if div else 0.0


@njit(cache=True, nogil=True)
def orbit_points(x1, x2, y, delta, eps, gamma, beta, fa, fb, fc, T, y_limit):
    """States f^t(s0) for t = 0..T; returns (x1s, x2s, ys, n_filled)."""
    xs1 = np.empty(T + 1)
    xs2 = np.empty(T + 1)
    ys = np.empty(T + 1)
    for t in range(T + 1):
        if not (abs(y) <= y_limit):
            return xs1, xs2, ys, t
        xs1[t] = x1
        xs2[t] = x2
        ys[t] = y
        f = (-fa * math.sin(TWO_PI * x1) - fb * math.sin(TWO_PI * x2)
             - fc * math.sin(TWO_PI * (x1 - x2)))
        y = y + eps * f
        o1 = y + gamma
        o2 = -delta + beta * y * y
        x1 = (x1 + o1) % 1.0
        x2 = (x2 + o2) % 1.0
    return xs1, xs2, ys, T + 1


@njit(cache=True, nogil=True)
def resonance_scan(w1, w2, rho, m_max):
    """Minimal-order resonance search.

    Orders M = |m|_1 are scanned ascending; within an order, m2 runs from -M
    to M with m1 = M - |m2| >= 0.  The running minimum distance is kept with
    strict improvement only, so ties resolve to scan order.  Returns
    (M, m1, m2, n, dist); M = -1 if no distance <= rho was found up to m_max.
    """
    best = 1.0e300
    bm1 = 0
    bm2 = 0
    bn = 0
    M = 0
    while M < m_max:
        M += 1
        for m2 in range(-M, M + 1):
            m1 = M - abs(m2)
            d = m1 * w1 + m2 * w2
            # round half away from zero, fixed for cross-platform determinism
            if d >= 0.0:
                n = math.floor(d + 0.5)
            else:
                n = -math.floor(-d + 0.5)
            dist = abs(d - n) / math.sqrt(m1 * m1 + m2 * m2)
            if dist < best:
                best = dist
                bm1 = m1
                bm2 = m2
                bn = n
        if best <= rho:
            return M, bm1, bm2, bn, best
    return -1, bm1, bm2, bn, best


@njit(cache=True, nogil=True)
def resonance_scan_batch(w1s, w2s, rho, m_max, out):
    """Batch resonance scan; out has shape (n, 4) = (M, m1, m2, n)."""
    for i in range(w1s.shape[0]):
        M, m1, m2, n, _ = resonance_scan(w1s[i], w2s[i], rho, m_max)
        out[i, 0] = M
        out[i, 1] = m1
        out[i, 2] = m2
        out[i, 3] = n
