"""Weighted Birkhoff averaging with an exponential bump window.

The window weights w_t are normalized samples of the bump
g(t) = exp(-1/(t(1-t))) on (0, 1).  Averaging an observable over two
consecutive windows of T iterates and comparing gives ``dig``, the
estimated number of agreeing digits: large on quasiperiodic orbits (the
average is superconvergent there), small on chaotic ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .vpmap import MapParams, PhaseState, Y_DIVERGENCE_LIMIT

DIG_CAP = 16.0

# Convention recorded in output metadata: window 1 covers iterates 0..T-1,
# window 2 covers T..2T-1; the t = 0 weight is exactly zero.
WINDOW_OFFSET_CONVENTION = "windows t=0..T-1 and t=T..2T-1 (weight at t=0 is 0)"


def bump(t: float) -> float:
    """exp(-1/(t(1-t))) on (0, 1), exactly 0 at and beyond the endpoints."""
    u = t * (1.0 - t)
    if u <= 0.0:
        return 0.0
    return math.exp(-1.0 / u)


@dataclass(frozen=True)
class WeightPlan:
    T: int
    weights: np.ndarray  # shape (T,), sums to 1, weights[0] == 0


def make_weight_plan(T: int) -> WeightPlan:
    """Normalized bump weights for a window of T iterates.

    The bump argument t(T-t)/T^2 is formed from the exact integer product
    t*(T-t), which is symmetric under t <-> T-t, so the weight symmetry
    holds bitwise.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    t = np.arange(T, dtype=np.int64)
    u = (t * (T - t)).astype(np.float64) / (float(T) * float(T))
    w = np.zeros(T, dtype=np.float64)
    pos = u > 0.0
    w[pos] = np.exp(-1.0 / u[pos])
    w /= w.sum()
    w.setflags(write=False)
    return WeightPlan(T=T, weights=w)


@lru_cache(maxsize=8)
def cached_weight_plan(T: int) -> WeightPlan:
    return make_weight_plan(T)


def weighted_average(stream, plan: WeightPlan) -> np.ndarray:
    """Sum w_t * h_t over the stream, componentwise.

    Plain summation in ascending t (no compensation, no reordering) so the
    result is bit-reproducible.  The stream must yield exactly plan.T items.
    """
    w = plan.weights
    acc = None
    count = 0
    for t, h in enumerate(stream):
        if t >= plan.T:
            raise ValueError(f"stream longer than plan.T = {plan.T}")
        h = np.asarray(h, dtype=np.float64)
        if acc is None:
            acc = np.zeros_like(h)
        acc = acc + w[t] * h
        count += 1
    if count != plan.T:
        raise ValueError(f"stream yielded {count} items, expected {plan.T}")
    return acc


def two_window_dig(v1, v2, cap: float = DIG_CAP) -> float:
    """Agreeing digits between two window averages: min over components.

    Exact agreement (and anything below 10^-cap) is capped at ``cap``;
    differences above 1 give negative values, stored as-is.
    """
    dig = cap
    for a, b in zip(np.atleast_1d(v1), np.atleast_1d(v2)):
        diff = abs(a - b)
        if math.isnan(diff):
            return math.nan
        if diff != 0.0:
            dig = min(dig, min(cap, -math.log10(diff)))
    return dig


@dataclass(frozen=True)
class AverageResult:
    value: tuple[float, float]
    value_second_window: tuple[float, float]
    dig: float
    T: int
    diverged: bool = False


def rotation_vector_with_dig(s0: PhaseState, params: MapParams, T: int,
                             plan: WeightPlan | None = None) -> AverageResult:
    """Rotation-vector estimate from two weighted windows of 2T iterates.

    The observable is Omega(y_t) evaluated on the state *before* step t.
    ``value`` is the first window's average; ``dig`` compares the windows
    componentwise.  A diverged orbit yields NaN averages and dig, flagged.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    if plan is None:
        plan = cached_weight_plan(T)
    elif plan.T != T:
        raise ValueError("plan.T does not match T")
    a11, a12, a21, a22, diverged = _kernels.wb_two_windows(
        float(s0.x1), float(s0.x2), float(s0.y),
        params.delta, params.eps, params.gamma, params.beta,
        params.a, params.b, params.c,
        plan.weights, T, Y_DIVERGENCE_LIMIT)
    if diverged:
        return AverageResult((math.nan, math.nan), (math.nan, math.nan),
                             math.nan, T, diverged=True)
    dig = two_window_dig((a11, a12), (a21, a22))
    return AverageResult((a11, a12), (a21, a22), dig, T)
