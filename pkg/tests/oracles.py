"""Independent, deliberately naive reference implementations used as oracles.

These stay decoupled from the library's fast paths: brute-force double loops,
finite differences, and plain rigid-rotation iteration.
"""

import math

import numpy as np


def naive_resonance_order(w, rho, m_limit=20000):
    """Double loop over every m with |m|_1 <= m_limit, smallest order first."""
    for M in range(1, m_limit + 1):
        best = None
        for m1 in range(-M, M + 1):
            m2a = M - abs(m1)
            for m2 in ({m2a, -m2a}):
                if m1 == 0 and m2 == 0:
                    continue
                d = m1 * w[0] + m2 * w[1]
                n = round(d)
                dist = abs(d - n) / math.hypot(m1, m2)
                if dist <= rho and (best is None or dist < best[0]):
                    best = (dist, m1, m2, n)
        if best is not None:
            return M, best
    return None, None


def naive_best_periods(w, q_max):
    """Strict record minimizers of the max distance-to-integer, plain loop."""
    records = []
    best = math.inf
    for q in range(1, q_max + 1):
        d = max(abs(q * w[0] - round(q * w[0])),
                abs(q * w[1] - round(q * w[1])))
        if d < best:
            best = d
            records.append(q)
    return records


def fd_jacobian(f, x, h=1.0e-6):
    """Central finite-difference Jacobian of f: R^n -> R^n."""
    x = np.asarray(x, dtype=float)
    n = x.size
    J = np.empty((n, n))
    for j in range(n):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h)
    return J


def rigid_rotation_samples(x0, omega, T):
    """cos(2 pi x_t) along x_{t+1} = x_t + omega mod 1."""
    t = np.arange(T, dtype=np.float64)
    xs = (x0 + t * omega) % 1.0
    return np.cos(2.0 * math.pi * xs)
