"""Fixed-frequency continuation of tori in eps and critical-eps location.

For a target frequency w* the two-parameter root problem

    WB-rotation-vector(y0, delta; eps) - w* = 0

is solved by a damped quasi-Newton iteration with a central finite-difference
Jacobian, marching eps upward with a secant predictor.  A torus "exists" at
eps when the solve converges and the two-window digit agreement clears the
chaos cutoff; the critical eps is bracketed by bisection on that predicate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .birkhoff import DIG_CAP, cached_weight_plan
from .sweep import GridSpec, OrbitRecord, _run_cells
from .vpmap import GOLDEN_GAMMA, Y_DIVERGENCE_LIMIT, FrequencyVector

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContinuationConfig:
    T: int = 10 ** 6
    residual_tol: float = 1.0e-11
    fd_step: float = 1.0e-7
    max_iter: int = 25
    max_halvings: int = 6
    dig_cutoff: float = 11.0
    eps_step: float = 2.0e-3
    eps_step_floor: float = 1.0e-10
    bracket_tol: float = 1.0e-9
    gamma: float = GOLDEN_GAMMA
    beta: float = 2.0
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def inverse_frequency(self, w) -> tuple[float, float]:
        y = w[0] - self.gamma
        return y, self.beta * y * y - w[1]


@dataclass(frozen=True)
class ContinuationPoint:
    eps: float
    y0: float
    delta: float
    omega_err: float  # inf-norm of achieved omega - omega*
    dig: float
    converged: bool
    torus: bool       # converged and dig above the cutoff
    iterations: int


@dataclass(frozen=True)
class CriticalResult:
    omega_star: FrequencyVector
    eps_c: float
    y_c: float
    delta_c: float
    bracket: tuple[float, float]  # (eps_ok, eps_fail)
    path: tuple[ContinuationPoint, ...]


class _Objective:
    """Rotation-vector evaluations at fixed eps; orbits start at x = (0, 0)."""

    def __init__(self, omega_star, eps: float, cfg: ContinuationConfig):
        self.w_star = (float(omega_star[0]), float(omega_star[1]))
        self.eps = eps
        self.cfg = cfg
        self.plan = cached_weight_plan(cfg.T)

    def eval(self, y0: float, delta: float):
        """Residual (r1, r2), its inf-norm, and dig at (y0, delta)."""
        a11, a12, a21, a22, div = _kernels.wb_two_windows(
            0.0, 0.0, y0, delta, self.eps,
            self.cfg.gamma, self.cfg.beta, self.cfg.a, self.cfg.b, self.cfg.c,
            self.plan.weights, self.cfg.T, Y_DIVERGENCE_LIMIT)
        if div:
            return (math.nan, math.nan), math.inf, math.nan
        r = (a11 - self.w_star[0], a12 - self.w_star[1])
        d1 = abs(a11 - a21)
        d2 = abs(a12 - a22)
        dig = min(DIG_CAP if d1 == 0.0 else min(DIG_CAP, -math.log10(d1)),
                  DIG_CAP if d2 == 0.0 else min(DIG_CAP, -math.log10(d2)))
        return r, max(abs(r[0]), abs(r[1])), dig

    def jacobian(self, y0: float, delta: float) -> np.ndarray:
        h = self.cfg.fd_step
        lanes_y = np.array([y0 + h, y0 - h, y0, y0])
        lanes_d = np.array([delta, delta, delta + h, delta - h])
        out = np.empty((4, 5))
        _kernels.wb_two_windows_batch(
            np.zeros(4), np.zeros(4), lanes_y, lanes_d,
            np.full(4, self.eps),
            self.cfg.gamma, self.cfg.beta, self.cfg.a, self.cfg.b, self.cfg.c,
            self.plan.weights, self.cfg.T, Y_DIVERGENCE_LIMIT, out)
        if np.any(out[:, 4] != 0.0):
            raise FloatingPointError("orbit diverged during Jacobian stencil")
        return np.array([
            [(out[0, 0] - out[1, 0]) / (2 * h), (out[2, 0] - out[3, 0]) / (2 * h)],
            [(out[0, 1] - out[1, 1]) / (2 * h), (out[2, 1] - out[3, 1]) / (2 * h)],
        ])


def solve_torus(omega_star, eps: float, guess: tuple[float, float],
                cfg: ContinuationConfig | None = None) -> ContinuationPoint:
    """Damped quasi-Newton solve for (y0, delta) with rotation vector w*.

    Accepts when the residual inf-norm drops below cfg.residual_tol; a
    converged point whose dig is at or below the cutoff is flagged as a lost
    torus (torus = False).  Non-convergence returns the best visited point.
    """
    if cfg is None:
        cfg = ContinuationConfig()
    obj = _Objective(omega_star, eps, cfg)
    y, d = float(guess[0]), float(guess[1])
    r, rnorm, dig = obj.eval(y, d)
    best = (rnorm, y, d, dig)
    iterations = 0
    while rnorm >= cfg.residual_tol and iterations < cfg.max_iter:
        iterations += 1
        try:
            J = obj.jacobian(y, d)
            step = np.linalg.solve(J, np.array(r))
        except (FloatingPointError, np.linalg.LinAlgError):
            break
        lam = 1.0
        improved = False
        for _ in range(cfg.max_halvings + 1):
            y_new = y - lam * step[0]
            d_new = d - lam * step[1]
            r_new, rnorm_new, dig_new = obj.eval(y_new, d_new)
            if rnorm_new < rnorm:
                y, d, r, rnorm, dig = y_new, d_new, r_new, rnorm_new, dig_new
                improved = True
                break
            lam /= 2.0
        if not improved:
            break
        if rnorm < best[0]:
            best = (rnorm, y, d, dig)
    rnorm, y, d, dig = best[0], best[1], best[2], best[3]
    converged = rnorm < cfg.residual_tol
    return ContinuationPoint(eps, y, d, rnorm, dig, converged,
                             converged and dig > cfg.dig_cutoff, iterations)


def _predict(points: list[ContinuationPoint], eps: float) -> tuple[float, float]:
    """Secant extrapolation of (y0, delta) from the last two accepted points."""
    if len(points) >= 2:
        p0, p1 = points[-2], points[-1]
        de = p1.eps - p0.eps
        if de != 0.0:
            t = (eps - p1.eps) / de
            return (p1.y0 + t * (p1.y0 - p0.y0),
                    p1.delta + t * (p1.delta - p0.delta))
    return points[-1].y0, points[-1].delta


def continue_torus(omega_star, eps_start: float, eps_end: float,
                   cfg: ContinuationConfig | None = None,
                   guess: tuple[float, float] | None = None
                   ) -> tuple[list[ContinuationPoint], tuple[float, float] | None]:
    """March eps from eps_start toward eps_end recording accepted tori.

    On a failed solve the eps step halves (floor cfg.eps_step_floor) and the
    march retries from the last accepted point.  Returns the path and, if the
    march stalled before eps_end, the failure bracket (eps_ok, eps_fail).
    """
    if cfg is None:
        cfg = ContinuationConfig()
    if not eps_start < eps_end:
        raise ValueError("eps_start must be < eps_end")
    if guess is None:
        guess = cfg.inverse_frequency(omega_star)
    points: list[ContinuationPoint] = []
    d_eps = cfg.eps_step
    eps = eps_start
    first_fail: float | None = None
    for _ in range(10_000):
        g = _predict(points, eps) if points else guess
        pt = solve_torus(omega_star, eps, g, cfg)
        if pt.torus:
            points.append(pt)
            log.debug("continuation: eps=%.9g ok (dig=%.2f, %d iters)",
                      eps, pt.dig, pt.iterations)
            if eps >= eps_end:
                return points, None
            eps = min(eps + d_eps, eps_end)
        else:
            first_fail = eps
            log.debug("continuation: eps=%.9g failed (res=%.3g dig=%.2f)",
                      eps, pt.omega_err, pt.dig)
            if not points:
                raise RuntimeError(
                    f"no torus at the starting eps={eps_start}; cannot continue")
            d_eps /= 2.0
            if d_eps < cfg.eps_step_floor:
                return points, (points[-1].eps, first_fail)
            eps = points[-1].eps + d_eps
    raise RuntimeError("continuation failed to terminate")


def locate_critical_eps(omega_star, cfg: ContinuationConfig | None = None,
                        eps_start: float = 2.0e-3, eps_cap: float = 0.2
                        ) -> CriticalResult:
    """Bisect the torus-existence boundary for a fixed rotation vector.

    First marches eps upward until a solve fails, then bisects the bracket
    (each probe is a full solve) until it is no wider than cfg.bracket_tol.
    The reported eps_c is the conservative lower edge.
    """
    if cfg is None:
        cfg = ContinuationConfig()
    points: list[ContinuationPoint] = []
    eps = eps_start
    fail_eps: float | None = None
    guess = cfg.inverse_frequency(omega_star)
    while fail_eps is None:
        g = _predict(points, eps) if points else guess
        pt = solve_torus(omega_star, eps, g, cfg)
        if pt.torus:
            points.append(pt)
            eps += cfg.eps_step
            if eps > eps_cap:
                raise RuntimeError(f"no breakup found below eps_cap={eps_cap}")
        else:
            if not points:
                raise RuntimeError(
                    f"no torus at the starting eps={eps_start}")
            fail_eps = eps
    lo = points[-1]
    hi = fail_eps
    while hi - lo.eps > cfg.bracket_tol:
        mid = 0.5 * (lo.eps + hi)
        g = _predict(points, mid)
        pt = solve_torus(omega_star, mid, g, cfg)
        if pt.torus:
            points.append(pt)
            lo = pt
        else:
            hi = mid
    # the digit count is not monotone through the breakup: it can hover at
    # the cutoff over a few bracket widths.  Re-verify the failing edge from
    # the accepted solution; if it flips, widen the probe once and keep the
    # conservative lower edge either way.
    guess_c = (lo.y0, lo.delta)
    hi_pt = solve_torus(omega_star, hi, guess_c, cfg)
    if hi_pt.torus:
        hi = lo.eps + 5.0 * max(cfg.bracket_tol, hi - lo.eps)
        hi_pt = solve_torus(omega_star, hi, guess_c, cfg)
        if hi_pt.torus:
            log.warning("upper bracket edge still carries a torus after "
                        "widening; eps_c is the conservative lower edge")
    log.info("critical eps for omega*=(%.12g, %.12g): %.12g (bracket %.3g)",
             omega_star[0], omega_star[1], lo.eps, hi - lo.eps)
    return CriticalResult(FrequencyVector(float(omega_star[0]),
                                          float(omega_star[1])),
                          lo.eps, lo.y0, lo.delta, (lo.eps, hi),
                          tuple(sorted(points, key=lambda p: p.eps)))


@dataclass(frozen=True)
class RobustnessScan:
    more_robust: int
    window: float
    records: tuple[OrbitRecord, ...]


def local_robustness_scan(omega_star, critical: CriticalResult,
                          spec: GridSpec, window: float = 0.002,
                          spacing: float = 1.0e-4,
                          eps_spacing: float = 4.0e-5,
                          eps_margin: float = 0.005,
                          threads: int | None = None) -> RobustnessScan:
    """Count nearby tori more robust than the critical one.

    Fixes delta = delta_c and scans y around y_c with the given omega_1
    spacing (the eps = 0 relation gives d omega_1 / d y = 1), classifying a
    (y, eps) grid up to eps_c + eps_margin.  A grid point counts as more
    robust when it is rotational, its omega_1 lies within the window of
    omega_1*, and its eps exceeds eps_c.
    """
    if window <= 0.0 or spacing <= 0.0:
        return RobustnessScan(0, window, ())
    k_max = int(math.floor(window / spacing))
    y_axis = critical.y_c + spacing * np.arange(-k_max, k_max + 1)
    eps_axis = np.arange(eps_spacing, critical.eps_c + eps_margin + eps_spacing / 2,
                         eps_spacing)
    n = len(y_axis) * len(eps_axis)
    y0 = np.repeat(y_axis, len(eps_axis))
    eps = np.tile(eps_axis, len(y_axis))
    delta = np.full(n, critical.delta_c)
    p1 = y0 + spec.gamma
    p2 = spec.beta * y0 * y0 - critical.delta_c
    records = _run_cells(p1, p2, y0, delta, eps, spec, threads)
    w1_star = float(omega_star[0])
    count = 0
    kept = []
    for r in records:
        if r.cls != "rotational":
            continue
        if abs(r.omega[0] - w1_star) >= window:
            continue
        kept.append(r)
        if r.eps > critical.eps_c:
            count += 1
    return RobustnessScan(count, window, tuple(kept))
