"""Standard volume-preserving map on T^2 x R: definition and exact helpers.

The map is the composition of two shears,

    y' = y + eps * F(x)              (action shear)
    x' = x + Omega(y') mod 1         (angle shear)

with frequency map Omega(y) = (y + gamma, -delta + beta*y^2) and a
three-harmonic force F.  Composed in this order the map is exactly
volume-preserving.  Angles live in [0, 1); the action y is unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

GOLDEN_GAMMA = (math.sqrt(5.0) - 1.0) / 2.0

# Orbits with |y| beyond this are treated as numerically blown up.  Physical
# orbits of interest stay in |y| < 1.
Y_DIVERGENCE_LIMIT = 1.0e10

TWO_PI = 2.0 * math.pi


class FrequencyVector(NamedTuple):
    w1: float
    w2: float


class PhaseState(NamedTuple):
    """One point (x1, x2, y) of phase space, angles reduced into [0, 1)."""

    x1: float
    x2: float
    y: float


@dataclass(frozen=True)
class MapParams:
    """All constants of the map; delta and eps are the per-run parameters."""

    delta: float
    eps: float
    gamma: float = GOLDEN_GAMMA
    beta: float = 2.0
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if self.beta == 0.0:
            raise ValueError("beta must be nonzero (no twist)")
        if self.eps < 0.0:
            raise ValueError("eps must be >= 0")
        for name in ("delta", "eps", "gamma", "beta", "a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


class OrbitDivergenceError(RuntimeError):
    """Raised when |y| exceeds the divergence guard during iteration."""

    def __init__(self, step: int, y: float):
        super().__init__(f"orbit diverged at step {step}: |y|={abs(y):.3e}")
        self.step = step
        self.y = y


def frequency_map(y: float, params: MapParams) -> FrequencyVector:
    """Omega(y, delta) = (y + gamma, -delta + beta*y^2), not reduced mod 1."""
    return FrequencyVector(y + params.gamma, -params.delta + params.beta * y * y)


def inverse_frequency(w: FrequencyVector, params: MapParams) -> tuple[float, float]:
    """Invert the frequency map: (y, delta) with Omega(y, delta) = w."""
    y = w[0] - params.gamma
    delta = params.beta * y * y - w[1]
    return y, delta


def force(x1: float, x2: float, params: MapParams) -> float:
    return (
        -params.a * math.sin(TWO_PI * x1)
        - params.b * math.sin(TWO_PI * x2)
        - params.c * math.sin(TWO_PI * (x1 - x2))
    )


def shear_action(s: PhaseState, params: MapParams) -> PhaseState:
    """First sub-shear: kick the action, angles untouched."""
    return PhaseState(s.x1, s.x2, s.y + params.eps * force(s.x1, s.x2, params))


def shear_angle(s: PhaseState, params: MapParams) -> PhaseState:
    """Second sub-shear: rotate the angles by Omega(y), reduced mod 1."""
    w1, w2 = frequency_map(s.y, params)
    return PhaseState((s.x1 + w1) % 1.0, (s.x2 + w2) % 1.0, s.y)


def step(s: PhaseState, params: MapParams) -> PhaseState:
    """One full map step: action shear first, then angle shear.

    The evaluation order is load-bearing: x is advanced with Omega of the
    *updated* action, which is what makes the composition volume-preserving.
    """
    return shear_angle(shear_action(s, params), params)


def step_lift(s: PhaseState, params: MapParams) -> PhaseState:
    """Map step on the universal cover (angles not reduced mod 1).

    Agrees with :func:`step` modulo 1 in the angles; useful wherever a
    derivative across the wrap would be meaningless.
    """
    y = s.y + params.eps * force(s.x1, s.x2, params)
    w1, w2 = frequency_map(y, params)
    return PhaseState(s.x1 + w1, s.x2 + w2, y)


class OrbitStream:
    """Lazily yields observe(f^t(s0)) for t = 0 .. T-1 without storing the orbit.

    After exhaustion, ``final_state`` holds f^T(s0) so a second averaging
    window can continue where this one stopped.  Divergence of the action
    raises :class:`OrbitDivergenceError` carrying the offending step index.
    """

    def __init__(self, s0: PhaseState, params: MapParams, T: int,
                 observe: Callable[[PhaseState], tuple]):
        if T < 1:
            raise ValueError("T must be >= 1")
        self.params = params
        self.T = T
        self.observe = observe
        self._state = s0
        self.final_state: PhaseState | None = None

    def __iter__(self) -> Iterator[tuple]:
        s = self._state
        params = self.params
        for t in range(self.T):
            if not math.isfinite(s.y) or abs(s.y) > Y_DIVERGENCE_LIMIT:
                raise OrbitDivergenceError(t, s.y)
            yield self.observe(s)
            s = step(s, params)
        if not math.isfinite(s.y) or abs(s.y) > Y_DIVERGENCE_LIMIT:
            raise OrbitDivergenceError(self.T, s.y)
        self.final_state = s


def iterate_observable(s0: PhaseState, params: MapParams, T: int,
                       observe: Callable[[PhaseState], tuple]) -> OrbitStream:
    return OrbitStream(s0, params, T, observe)


def resonance_locus_y(m: tuple[int, int], n: int, delta: float,
                      params: MapParams | None = None) -> list[float]:
    """Real roots y of m . Omega(y, delta) = n, sorted ascending.

    For m2 != 0 this is the quadratic beta*m2*y^2 + m1*y + (m1*gamma - m2*delta - n) = 0;
    for m2 = 0 a single linear root.  m = (0, 0) is degenerate.
    """
    if params is None:
        params = MapParams(delta=delta, eps=0.0)
    m1, m2 = m
    if m1 == 0 and m2 == 0:
        raise ValueError("degenerate resonance vector m = (0, 0)")
    gamma, beta = params.gamma, params.beta
    c0 = m1 * gamma - m2 * delta - n
    if m2 == 0:
        return [-c0 / m1]
    qa = beta * m2
    disc = m1 * m1 - 4.0 * qa * c0
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-m1 / (2.0 * qa)]
    sq = math.sqrt(disc)
    roots = [(-m1 - sq) / (2.0 * qa), (-m1 + sq) / (2.0 * qa)]
    roots.sort()
    return roots
