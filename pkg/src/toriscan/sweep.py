"""Grid sweeps over the accessible (y0, delta) domain and orbit classification.

The pipeline per cell: iterate from (0, 0, y0), estimate the rotation
vector and its two-window digit agreement, then classify

    unbounded   computed frequency left the omega box, or the orbit blew up
    chaotic     dig at or below the cutoff
    resonant    nonchaotic with resonance order M <= M_cutoff at precision rho
    rotational  nonchaotic and nonresonant: taken to lie on a rotational torus

Grids are laid over p in [-0.05, 1.05]^2 (a buffer around the unit omega
box) and mapped through the inverse frequency map, so at eps = 0 every
cell's frequency equals its p exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels, _parallel
from .birkhoff import DIG_CAP, cached_weight_plan
from .resonance import (CLASSIFY_RHO, DEFAULT_M_MAX, RESONANT_ORDER_CUTOFF,
                        OrderResult, ResonanceHit, canonical_hit)
from .vpmap import GOLDEN_GAMMA, Y_DIVERGENCE_LIMIT, FrequencyVector, MapParams

log = logging.getLogger(__name__)

UNBOUNDED = "unbounded"
CHAOTIC = "chaotic"
RESONANT = "resonant"
ROTATIONAL = "rotational"

_CLASS_NAMES = (UNBOUNDED, CHAOTIC, RESONANT, ROTATIONAL)


@dataclass(frozen=True)
class GridSpec:
    """Sweep configuration; defaults follow the classification cutoffs
    calibrated for T = 1e6 windows (dig > 11, M(omega, 1e-9) > 251)."""

    eps_list: tuple[float, ...]
    n1: int = 100
    n2: int = 100
    p1_range: tuple[float, float] = (-0.05, 1.05)
    p2_range: tuple[float, float] = (-0.05, 1.05)
    T: int = 10 ** 6
    dig_cutoff: float = 11.0
    rho: float = CLASSIFY_RHO
    m_cutoff: int = RESONANT_ORDER_CUTOFF
    m_max: int = DEFAULT_M_MAX
    omega_box: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    x0: tuple[float, float] = (0.0, 0.0)
    gamma: float = GOLDEN_GAMMA
    beta: float = 2.0
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    # Optional early-abort when |y| exceeds this (speed knob, off by default;
    # the classification itself only uses the omega box).
    y_escape: float | None = None
    chunk: int = 2048

    def map_params(self, delta: float, eps: float) -> MapParams:
        return MapParams(delta=delta, eps=eps, gamma=self.gamma,
                         beta=self.beta, a=self.a, b=self.b, c=self.c)

    def p_axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.p1_range[0], self.p1_range[1], self.n1),
                np.linspace(self.p2_range[0], self.p2_range[1], self.n2))


@dataclass(frozen=True)
class OrbitRecord:
    p1: float
    p2: float
    y0: float
    delta: float
    eps: float
    omega: FrequencyVector
    dig: float
    M: int | None
    cls: str
    hit: ResonanceHit | None = None


@dataclass(frozen=True)
class SweepResult:
    records: list[OrbitRecord]
    spec: GridSpec
    summary: list[dict]


def _classify_arrays(y0, delta, eps, spec: GridSpec,
                     threads: int | None = None):
    """Vectorized classification; returns parallel arrays over the cells."""
    n = y0.shape[0]
    plan = cached_weight_plan(spec.T)
    y_limit = spec.y_escape if spec.y_escape is not None else Y_DIVERGENCE_LIMIT
    w1 = np.empty(n)
    w2 = np.empty(n)
    dig = np.empty(n)
    cls = np.empty(n, dtype=np.int8)
    M = np.full(n, -1, dtype=np.int64)
    hits = np.zeros((n, 3), dtype=np.int64)
    # frequencies are only resolved to about rho, so the escape test gets the
    # same slack: orbits locked onto a box-edge resonance (omega_1 = 1 say)
    # must not flip to unbounded on a last-ulp wobble
    box = (spec.omega_box[0] - spec.rho, spec.omega_box[1] + spec.rho,
           spec.omega_box[2] - spec.rho, spec.omega_box[3] + spec.rho)

    def worker(lo, hi):
        out = np.empty((hi - lo, 5))
        _kernels.wb_two_windows_batch(
            np.full(hi - lo, spec.x0[0]), np.full(hi - lo, spec.x0[1]),
            y0[lo:hi], delta[lo:hi], eps[lo:hi],
            spec.gamma, spec.beta, spec.a, spec.b, spec.c,
            plan.weights, spec.T, y_limit, out)
        for i in range(hi - lo):
            j = lo + i
            a11, a12, a21, a22, div = out[i]
            w1[j] = a11
            w2[j] = a12
            if div:
                dig[j] = math.nan
                cls[j] = 0
                continue
            d1 = abs(a11 - a21)
            d2 = abs(a12 - a22)
            dg = min(DIG_CAP if d1 == 0.0 else min(DIG_CAP, -math.log10(d1)),
                     DIG_CAP if d2 == 0.0 else min(DIG_CAP, -math.log10(d2)))
            dig[j] = dg
            if not (box[0] <= a11 <= box[1] and box[2] <= a12 <= box[3]):
                cls[j] = 0
            elif dg <= spec.dig_cutoff:
                cls[j] = 1
            else:
                Mj, m1, m2, nres, _ = _kernels.resonance_scan(
                    a11, a12, spec.rho, spec.m_max)
                if Mj > 0:
                    M[j] = Mj
                    hits[j] = (m1, m2, nres)
                cls[j] = 2 if 0 < Mj <= spec.m_cutoff else 3

    _parallel.run_chunked(n, worker, threads=threads, chunk=spec.chunk)
    return w1, w2, dig, cls, M, hits


def _make_record(p1, p2, y0, delta, eps, w1, w2, dig, cls, M, hit) -> OrbitRecord:
    name = _CLASS_NAMES[cls]
    order = None
    res_hit = None
    if cls >= 2 and M > 0:
        order = int(M)
        m1, m2, nres = (int(v) for v in hit)
        dist = (abs(m1 * w1 + m2 * w2 - nres) / math.hypot(m1, m2)
                if (m1, m2) != (0, 0) else math.nan)
        res_hit = canonical_hit(m1, m2, nres, dist)
    return OrbitRecord(float(p1), float(p2), float(y0), float(delta),
                       float(eps), FrequencyVector(float(w1), float(w2)),
                       float(dig), order, name, res_hit)


def classify_orbit(y0: float, delta: float, eps: float,
                   spec: GridSpec) -> OrbitRecord:
    """Classify the single orbit started at (x0, y0); p is Omega(y0, delta)."""
    ya = np.array([y0], dtype=np.float64)
    da = np.array([delta], dtype=np.float64)
    ea = np.array([eps], dtype=np.float64)
    w1, w2, dig, cls, M, hits = _classify_arrays(ya, da, ea, spec, threads=1)
    p1 = y0 + spec.gamma
    p2 = -delta + spec.beta * y0 * y0
    return _make_record(p1, p2, y0, delta, eps, w1[0], w2[0], dig[0],
                        cls[0], M[0], hits[0])


def order_result(record: OrbitRecord, rho: float) -> OrderResult:
    return OrderResult(record.M, record.hit, rho)


def _summarize(records: Sequence[OrbitRecord],
               eps_list: Sequence[float]) -> list[dict]:
    rows = []
    for eps in eps_list:
        sel = [r for r in records if r.eps == eps]
        cells = len(sel)
        bounded = sum(r.cls != UNBOUNDED for r in sel)
        chaotic = sum(r.cls == CHAOTIC for r in sel)
        resonant = sum(r.cls == RESONANT for r in sel)
        rotational = sum(r.cls == ROTATIONAL for r in sel)
        nonchaotic = resonant + rotational
        rows.append({
            "eps": eps,
            "cells": cells,
            "bounded": bounded,
            "chaotic": chaotic,
            "resonant": resonant,
            "rotational": rotational,
            "frac_bounded": bounded / cells if cells else math.nan,
            "frac_chaotic_of_bounded": chaotic / bounded if bounded else math.nan,
            "frac_resonant_of_nonchaotic":
                resonant / nonchaotic if nonchaotic else math.nan,
            "frac_rotational_of_nonchaotic":
                rotational / nonchaotic if nonchaotic else math.nan,
        })
    return rows


def _run_cells(p1, p2, y0, delta, eps, spec, threads) -> list[OrbitRecord]:
    w1, w2, dig, cls, M, hits = _classify_arrays(y0, delta, eps, spec, threads)
    return [_make_record(p1[i], p2[i], y0[i], delta[i], eps[i],
                         w1[i], w2[i], dig[i], cls[i], M[i], hits[i])
            for i in range(len(y0))]


def sweep_grid(spec: GridSpec, threads: int | None = None) -> SweepResult:
    """Classify every (grid point x eps) cell.

    Output order is deterministic regardless of the worker count: row-major
    over p (p1 outer, p2 inner), then eps ascending.
    """
    p1_axis, p2_axis = spec.p_axes()
    n_eps = len(spec.eps_list)
    n = spec.n1 * spec.n2 * n_eps
    p1 = np.empty(n)
    p2 = np.empty(n)
    eps = np.empty(n)
    k = 0
    for v1 in p1_axis:
        for v2 in p2_axis:
            for e in spec.eps_list:
                p1[k] = v1
                p2[k] = v2
                eps[k] = e
                k += 1
    y0 = p1 - spec.gamma
    delta = spec.beta * y0 * y0 - p2
    log.info("sweep: %d cells (%dx%d grid, %d eps values), T=%d",
             n, spec.n1, spec.n2, n_eps, spec.T)
    records = _run_cells(p1, p2, y0, delta, eps, spec, threads)
    summary = _summarize(records, spec.eps_list)
    for row in summary:
        log.info("eps=%-8g bounded %.3f chaotic|bounded %.3f rotational %d",
                 row["eps"], row["frac_bounded"],
                 row["frac_chaotic_of_bounded"], row["rotational"])
    return SweepResult(records, spec, summary)


def cross_section(delta: float, n_y: int, y_range: tuple[float, float],
                  n_eps: int, eps_range: tuple[float, float],
                  spec: GridSpec, threads: int | None = None) -> SweepResult:
    """Sweep restricted to one delta over a (y0, eps) grid.

    Emission order: y0 ascending (outer), eps ascending (inner).
    """
    y_axis = np.linspace(y_range[0], y_range[1], n_y)
    eps_axis = np.linspace(eps_range[0], eps_range[1], n_eps)
    n = n_y * n_eps
    y0 = np.repeat(y_axis, n_eps)
    eps = np.tile(eps_axis, n_y)
    deltas = np.full(n, delta)
    p1 = y0 + spec.gamma
    p2 = spec.beta * y0 * y0 - delta
    records = _run_cells(p1, p2, y0, deltas, eps, spec, threads)
    summary = _summarize(records, [float(e) for e in eps_axis])
    return SweepResult(records, replace(spec, eps_list=tuple(eps_axis)),
                       summary)


@dataclass(frozen=True)
class BinEntry:
    i: int
    j: int
    eps_c: float
    y0: float
    delta: float
    omega: FrequencyVector


@dataclass(frozen=True)
class BinTable:
    bin_size: float
    entries: tuple[BinEntry, ...]

    def count_above(self, eps_threshold: float) -> int:
        return sum(e.eps_c > eps_threshold for e in self.entries)


def critical_set_bins(records: Sequence[OrbitRecord],
                      bin_size: float = 0.01) -> BinTable:
    """Max-eps rotational torus per half-open omega bin [k*h, (k+1)*h)."""
    best: dict[tuple[int, int], OrbitRecord] = {}
    for r in records:
        if r.cls != ROTATIONAL:
            continue
        key = (int(math.floor(r.omega[0] / bin_size)),
               int(math.floor(r.omega[1] / bin_size)))
        cur = best.get(key)
        if cur is None or r.eps > cur.eps:
            best[key] = r
    entries = tuple(
        BinEntry(i, j, r.eps, r.y0, r.delta, r.omega)
        for (i, j), r in sorted(best.items()))
    return BinTable(bin_size, entries)


@dataclass(frozen=True)
class Survivor:
    y0: float
    delta: float
    omega: FrequencyVector


@dataclass(frozen=True)
class RefineConfig:
    """Knobs of the adaptive peak search; defaults are the full-accuracy
    settings, tests and desk-scale runs relax them."""

    region: tuple[float, float, float, float]  # (w1_lo, w1_hi, w2_lo, w2_hi)
    eps_start: float = 0.01
    d_eps0: float = 0.002
    coarse_n: int = 100
    fine_n: int = 10
    halt_box: float = 1.0e-12
    fine_switch: float | None = None  # grid spacing below which fine_n kicks in
    probe_eps: float = 1.0e-14
    margin_cells: float = 1.0
    max_steps: int = 500


@dataclass(frozen=True)
class PeakRecord:
    region: tuple[float, float, float, float]
    eps_c: float
    y0: float
    delta: float
    omega: FrequencyVector
    complete: bool
    steps: int
    # the (y_lo, y_hi, delta_lo, delta_hi) search box that produced the
    # record; the no-torus-above-eps_c invariant is probed inside it
    box: tuple[float, float, float, float] | None = None


def _dynamical_survivors(spec: GridSpec, region, threads: int | None
                         ) -> Callable[[tuple, float, int], list[Survivor]]:
    def survivors(domain, eps, grid_n) -> list[Survivor]:
        kind, box = domain
        if kind == "region":
            # initial pass: grid the omega region and pull back through the
            # inverse frequency map, as at eps = 0
            g1 = np.linspace(box[0], box[1], grid_n)
            g2 = np.linspace(box[2], box[3], grid_n)
            pp1 = np.repeat(g1, grid_n)
            pp2 = np.tile(g2, grid_n)
            y0 = pp1 - spec.gamma
            delta = spec.beta * y0 * y0 - pp2
        else:
            ylo, yhi, dlo, dhi = box
            y0 = np.repeat(np.linspace(ylo, yhi, grid_n), grid_n)
            delta = np.tile(np.linspace(dlo, dhi, grid_n), grid_n)
        eps_arr = np.full(y0.shape[0], eps)
        w1, w2, dig, cls, M, hits = _classify_arrays(
            y0, delta, eps_arr, spec, threads)
        out = []
        for i in range(y0.shape[0]):
            if cls[i] == 3 and (region[0] <= w1[i] <= region[1]
                                and region[2] <= w2[i] <= region[3]):
                out.append(Survivor(float(y0[i]), float(delta[i]),
                                    FrequencyVector(float(w1[i]), float(w2[i]))))
        return out

    return survivors


def refine_peak(spec: GridSpec, cfg: RefineConfig,
                threads: int | None = None,
                survivor_fn: Callable[[tuple, float, int], list[Survivor]] | None = None
                ) -> PeakRecord:
    """Adaptive search for the most robust torus in an omega region.

    Walks eps upward from cfg.eps_start over successively refined (y0, delta)
    grids: the grid re-boxes to the surviving tori (plus a one-cell margin)
    each step.  The eps increment grows by 1.3x while more than twelve tori
    survive, stays put for four to twelve, halves below four; with no
    survivors it halves and eps steps back down.  The grid drops from
    coarse_n^2 to fine_n^2 once its spacing falls below halt_box.  The search
    halts when a single torus is isolated in a box smaller than halt_box in
    both directions and none survives at eps + probe_eps.
    """
    if survivor_fn is None:
        survivor_fn = _dynamical_survivors(spec, cfg.region, threads)
    fine_switch = cfg.fine_switch if cfg.fine_switch is not None else cfg.halt_box
    domain: tuple = ("region", cfg.region)
    eps = cfg.eps_start
    d_eps = cfg.d_eps0
    grid_n = cfg.coarse_n
    best: Survivor | None = None
    best_eps = -math.inf
    best_box: tuple | None = None
    for step_count in range(1, cfg.max_steps + 1):
        kind, box = domain
        ext_y = box[1] - box[0]
        ext_d = box[3] - box[2]
        survivors = survivor_fn(domain, eps, grid_n)
        if survivors:
            if eps > best_eps:
                best_eps = eps
                best = survivors[0]
                best_box = box if kind == "box" else None
            if (len(survivors) == 1 and grid_n == cfg.fine_n and kind == "box"
                    and ext_y < cfg.halt_box and ext_d < cfg.halt_box
                    and not survivor_fn(domain, eps + cfg.probe_eps, grid_n)):
                s = survivors[0]
                log.info("refine: isolated peak at eps=%.15g after %d steps",
                         eps, step_count)
                return PeakRecord(cfg.region, eps, s.y0, s.delta, s.omega,
                                  True, step_count, box)
            # re-box to the survivors plus a one-grid-cell margin; the margin
            # uses the evaluation grid's spacing so a single survivor still
            # leaves a box of positive size to search at the next eps
            ys = [s.y0 for s in survivors]
            ds = [s.delta for s in survivors]
            floor_y = 4.0 * math.ulp(max(1.0, abs(min(ys)), abs(max(ys))))
            floor_d = 4.0 * math.ulp(max(1.0, abs(min(ds)), abs(max(ds))))
            cell_y = max(ext_y / max(grid_n - 1, 1), floor_y)
            cell_d = max(ext_d / max(grid_n - 1, 1), floor_d)
            domain = ("box", (min(ys) - cfg.margin_cells * cell_y,
                              max(ys) + cfg.margin_cells * cell_y,
                              min(ds) - cfg.margin_cells * cell_d,
                              max(ds) + cfg.margin_cells * cell_d))
            _, nbox = domain
            next_spacing = min(nbox[1] - nbox[0], nbox[3] - nbox[2]) / max(grid_n - 1, 1)
            if next_spacing < fine_switch:
                grid_n = cfg.fine_n
            count = len(survivors)
            if count > 12:
                d_eps *= 1.3
            elif count < 4:
                d_eps /= 2.0
            eps += d_eps
        else:
            d_eps /= 2.0
            eps_new = max(eps - d_eps, 0.0)
            if eps_new == eps:
                log.warning("refine: eps stagnated at %.17g", eps)
                break
            eps = eps_new
    else:
        log.warning("refine: step budget exhausted at eps=%.15g", eps)
    if best is None:
        return PeakRecord(cfg.region, math.nan, math.nan, math.nan,
                          FrequencyVector(math.nan, math.nan), False,
                          step_count)
    return PeakRecord(cfg.region, best_eps, best.y0, best.delta, best.omega,
                      False, step_count, best_box)
