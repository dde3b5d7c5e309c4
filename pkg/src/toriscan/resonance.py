"""Resonance geometry and the minimal-resonance-order search.

A frequency vector w is (m, n)-resonant to precision rho when the plane
m . w = n passes within Euclidean distance rho of w.  The order of the
closest admissible resonance, minimized over |m|_1, separates resonant
tori from rotational ones once rho is matched to the accuracy of w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, _parallel

# Classification defaults: resonance precision matched to the 11-digit
# accuracy cutoff, and the order threshold three standard deviations below
# the random-vector mean (10^2.4 = 251).
CLASSIFY_RHO = 1.0e-9
RESONANT_ORDER_CUTOFF = 251
DEFAULT_M_MAX = 10 ** 6


@dataclass(frozen=True)
class ResonanceHit:
    m1: int
    m2: int
    n: int
    distance: float

    @property
    def order(self) -> int:
        return abs(self.m1) + abs(self.m2)


@dataclass(frozen=True)
class OrderResult:
    M: int | None          # None when the scan hit its ceiling without a hit
    hit: ResonanceHit | None
    rho: float

    @property
    def found(self) -> bool:
        return self.M is not None


def canonical_hit(m1: int, m2: int, n: int, distance: float) -> ResonanceHit:
    """Fix signs: n >= 0, and for n = 0 the first nonzero m-component > 0.

    (m, n) and (-m, -n) define the same plane, so this is pure bookkeeping;
    applying it twice is a no-op.
    """
    if n < 0 or (n == 0 and (m1 < 0 or (m1 == 0 and m2 < 0))):
        m1, m2, n = -m1, -m2, -n
    return ResonanceHit(int(m1), int(m2), int(n), float(distance))


def resonance_distance(w, m: tuple[int, int], n: int) -> float:
    """Euclidean distance |m . w - n| / |m|_2 from w to the resonant plane."""
    m1, m2 = m
    if m1 == 0 and m2 == 0:
        raise ValueError("degenerate resonance vector m = (0, 0)")
    return abs(m1 * w[0] + m2 * w[1] - n) / math.hypot(m1, m2)


def resonance_order(w, rho: float, m_max: int = DEFAULT_M_MAX) -> OrderResult:
    """Smallest order M = |m|_1 with a resonance within distance rho of w.

    Scan: M ascending; within M, m2 from -M to M with m1 = M - |m2| >= 0
    (covering both signs of m is redundant up to (m, n) -> (-m, -n)).  Among
    hits at the terminating order the smallest distance wins, ties broken by
    scan order.  Hits are returned in canonical sign form.
    """
    if not (0.0 < rho < 1.0):
        raise ValueError("rho must lie in (0, 1)")
    M, m1, m2, n, dist = _kernels.resonance_scan(float(w[0]), float(w[1]),
                                                 rho, m_max)
    if M < 0:
        return OrderResult(None, None, rho)
    return OrderResult(int(M), canonical_hit(int(m1), int(m2), int(n), dist), rho)


def is_resonant(result: OrderResult,
                m_cutoff: int = RESONANT_ORDER_CUTOFF) -> bool:
    """True when the order is at or below the resonance cutoff."""
    if result.M is None:
        return False
    return result.M <= m_cutoff


@dataclass(frozen=True)
class OrderStatistics:
    rows: tuple  # (rho, mean log10 M, stdev log10 M) per rho
    slope: float
    intercept: float
    sample_count: int
    seed: int


def order_statistics(sample_count: int, rho_list, seed: int,
                     threads: int | None = None,
                     m_max: int = DEFAULT_M_MAX) -> OrderStatistics:
    """Resonance-order statistics over seeded uniform random w in [0,1]^2.

    Samples are drawn up front from one generator, so the result does not
    depend on the thread count.  Returns per-rho mean/stdev of log10 M and
    the least-squares line of mean versus log10 rho.
    """
    if sample_count < 100:
        raise ValueError("sample_count must be >= 100")
    rng = np.random.default_rng(seed)
    ws = rng.random((sample_count, 2))
    w1s = np.ascontiguousarray(ws[:, 0])
    w2s = np.ascontiguousarray(ws[:, 1])
    rows = []
    for rho in rho_list:
        out = np.empty((sample_count, 4), dtype=np.int64)

        def worker(lo, hi):
            _kernels.resonance_scan_batch(w1s[lo:hi], w2s[lo:hi],
                                          rho, m_max, out[lo:hi])

        _parallel.run_chunked(sample_count, worker, threads=threads, chunk=256)
        orders = out[:, 0]
        if np.any(orders < 0):
            raise RuntimeError("resonance scan ceiling reached for a sample")
        logm = np.log10(orders.astype(np.float64))
        rows.append((float(rho), float(logm.mean()), float(logm.std(ddof=1))))
    if len(rows) >= 2:
        logrho = np.array([math.log10(r) for r, _, _ in rows])
        means = np.array([m for _, m, _ in rows])
        slope, intercept = np.polyfit(logrho, means, 1)
    else:
        slope = intercept = math.nan
    return OrderStatistics(tuple(rows), float(slope), float(intercept),
                           sample_count, seed)
