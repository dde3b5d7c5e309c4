"""Simultaneous Diophantine approximation and Jacobi-Perron expansions.

Everything revolves around the pseudo-norm |v|_Z (max distance to the
integer grid per component): periods are its strict record minimizers
along q*w, the closeness c_s(w, q) = q*|q w|_Z^2 stays bounded away from
zero exactly for strongly irrational vectors, and the Jacobi-Perron map
generalizes the continued fraction to pairs, turning eventually periodic
on integral bases of cubic fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .cubic import CubicElement, CubicField, make_standard_fields
from .vpmap import FrequencyVector

_APPROX_CHUNK = 1 << 20

# Known fields (module-level shared isolating intervals; they only narrow).
FIELDS: dict[str, CubicField] = make_standard_fields()

# Variant -> coefficient pairs (a, b, c) for omega_1, omega_2 in the theta
# basis.  "freq" is the headline vector of each field (for d49 that is the
# permutation (alpha^2-1, alpha-1), elsewhere it coincides with "a").
_VARIANTS: dict[str, dict[str, tuple[tuple[int, int, int], tuple[int, int, int]]]] = {
    "spiral": {
        "a": ((-1, 1, 0), (-1, 0, 1)),      # (s-1, 1/s);  1/s = s^2 - 1
        "b": ((-1, 0, 1), (-1, 1, 0)),
        "sq": ((-1, 0, 1), (1, 1, -1)),     # (1/s, 1/s^2); 1/s^2 = 1 + s - s^2
    },
    "d31": {
        "a": ((-1, 1, 0), (0, -1, 1)),      # (K-1, 1/K);  1/K = K^2 - K
        "b": ((0, -1, 1), (-1, 1, 0)),
    },
    "d44": {
        "a": ((-1, 1, 0), (-1, -1, 1)),     # (T-1, 1/T);  1/T = T^2 - T - 1
        "b": ((-1, -1, 1), (-1, 1, 0)),
    },
    "d49": {
        "a": ((-1, 1, 0), (-2, 1, 1)),      # (A-1, 1/A);  1/A = A^2 + A - 2
        "b": ((-2, 1, 1), (-1, 1, 0)),
        "c": ((-1, 1, 0), (-1, 0, 1)),      # (A-1, A^2-1)
        "freq": ((-1, 0, 1), (-1, 1, 0)),   # (A^2-1, A-1)
    },
}

FIELD_ALIASES = {"d-23": "spiral", "d23": "spiral", "d-31": "d31",
                 "d-44": "d44", "d-49": "d49"}


def znorm(v) -> float:
    """Pseudo-norm: distance from v to the nearest integer vector in max norm."""
    best = 0.0
    for comp in v:
        d = abs(comp - round(comp))
        if d > best:
            best = d
    return best


def closeness_simultaneous(w, q: int) -> float:
    """c_s(w, q) = q * |q w|_Z^2 (two-dimensional exponent)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    d = znorm((q * w[0], q * w[1]))
    return q * d * d


def closeness_linear(w, m: tuple[int, int]) -> float:
    """c_l(w, m) = |m|_inf^2 * (distance of m . w to the nearest integer)."""
    m1, m2 = m
    if m1 == 0 and m2 == 0:
        raise ValueError("degenerate m = (0, 0)")
    d = m1 * w[0] + m2 * w[1]
    sup = max(abs(m1), abs(m2))
    return sup * sup * abs(d - round(d))


@dataclass(frozen=True)
class BestApproximant:
    q: int
    p: tuple[int, int]
    znorm: float
    closeness: float  # c_s = q * znorm^2


_SPLIT = 134217729.0  # 2^27 + 1, Dekker splitting constant


def _two_prod(a: np.ndarray, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact product a*b = p + e in doubles (Dekker/Veltkamp)."""
    p = a * b
    ah = _SPLIT * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLIT * b
    bh = bh - (bh - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _hi_lo(comp) -> tuple[float, float]:
    if isinstance(comp, CubicElement):
        hi = float(comp)
        return hi, float(comp - Fraction(hi))
    return float(comp), 0.0


def _frac_parts(q: np.ndarray, hi: float, lo: float):
    """Nearest integer and distance of q*(hi+lo), accurate to ~1e-16.

    A plain double q*w is only good to about q*1e-16, which washes out the
    closeness values for q beyond ~1e4; the compensated product keeps the
    full 16 digits.
    """
    p, e = _two_prod(q, hi)
    base = np.rint(p)
    s = (p - base) + (e + q * lo)
    n2 = np.rint(s)
    return base + n2, np.abs(s - n2)


def best_approximants(w, q_max: int,
                      input_precision: float | None = None) -> list[BestApproximant]:
    """Strict record minimizers of |q w|_Z over q = 1..q_max.

    q = 1 always opens the record list.  w may be a pair of floats or of
    exact cubic-field elements; exact components are split hi + lo so the
    distances stay accurate for large q.  When the vector carries a declared
    uncertainty rho, c_s(w, q) is only good to q*rho, so q_max above
    1e-4/rho is refused outright.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if input_precision is not None:
        bound = 1.0e-4 / input_precision
        if q_max > bound:
            raise ValueError(
                f"q_max = {q_max} exceeds the precision bound {bound:.3g} "
                f"(= 1e-4 / rho_input); closeness values would be meaningless")
    hi1, lo1 = _hi_lo(w[0])
    hi2, lo2 = _hi_lo(w[1])
    records: list[BestApproximant] = []
    carry = math.inf
    for start in range(1, q_max + 1, _APPROX_CHUNK):
        stop = min(start + _APPROX_CHUNK - 1, q_max)
        q = np.arange(start, stop + 1, dtype=np.float64)
        p1, d1 = _frac_parts(q, hi1, lo1)
        p2, d2 = _frac_parts(q, hi2, lo2)
        d = np.maximum(d1, d2)
        prefix = np.minimum.accumulate(np.concatenate(([carry], d)))[:-1]
        idx = np.nonzero(d < prefix)[0]
        for i in idx:
            qi = int(q[i])
            zi = float(d[i])
            records.append(BestApproximant(qi, (int(p1[i]), int(p2[i])),
                                           zi, qi * zi * zi))
        carry = min(carry, float(d.min()))
    return records


@dataclass(frozen=True)
class JpaExpansion:
    """Coefficient pairs (k, l) with a preperiod/period split.

    steps holds preperiod followed by one period (or everything computed
    when no period was detected, period_len = 0).  terminated marks a
    rational direction where the expansion stopped at omega_2 = 0.
    """

    steps: tuple[tuple[int, int], ...]
    preperiod_len: int
    period_len: int
    terminated: bool = False
    note: str = ""

    @property
    def preperiod(self) -> tuple[tuple[int, int], ...]:
        return self.steps[: self.preperiod_len]

    @property
    def period(self) -> tuple[tuple[int, int], ...]:
        return self.steps[self.preperiod_len:
                          self.preperiod_len + self.period_len]


def _minimal_rotation(steps, pre: int, per: int) -> tuple[int, int]:
    # Slide the period window left while the sequence allows it, so the
    # preperiod is minimal over the coefficient sequence.
    while pre > 0 and steps[pre - 1] == steps[pre + per - 1]:
        pre -= 1
    return pre, per


def _jpa_exact(w1: CubicElement, w2: CubicElement, max_steps: int) -> JpaExpansion:
    for comp in (w1, w2):
        if comp.is_zero() or comp.floor() != 0:
            raise ValueError("omega components must lie in (0, 1)")
    steps: list[tuple[int, int]] = []
    seen: dict[tuple, int] = {}
    state = (w1, w2)
    for i in range(max_steps):
        key = (state[0].coeffs(), state[1].coeffs())
        if key in seen:
            pre, per = _minimal_rotation(steps, seen[key], i - seen[key])
            return JpaExpansion(tuple(steps[: pre + per]), pre, per)
        seen[key] = i
        if state[1].is_zero():
            return JpaExpansion(tuple(steps), len(steps), 0, terminated=True)
        inv = state[1].inverse()
        r1 = inv
        r2 = state[0] * inv
        k = r1.floor()
        l = r2.floor()
        steps.append((k, l))
        state = (r1 - k, r2 - l)
    return JpaExpansion(tuple(steps), len(steps), 0,
                        note="no exact period within the step budget")


def _jpa_float(w1: float, w2: float, max_steps: int, tol: float) -> JpaExpansion:
    if not (0.0 < w1 < 1.0 and 0.0 <= w2 < 1.0):
        raise ValueError("omega components must lie in (0, 1)")
    steps: list[tuple[int, int]] = []
    states: list[tuple[float, float]] = [(w1, w2)]
    state = (w1, w2)
    for _ in range(max_steps):
        if state[1] <= tol:
            return JpaExpansion(tuple(steps), len(steps), 0, terminated=True)
        r1 = 1.0 / state[1]
        r2 = state[0] / state[1]
        k = math.floor(r1)
        l = math.floor(r2)
        steps.append((k, l))
        state = (r1 - k, r2 - l)
        states.append(state)
    # smallest period whose state recurs within tol AND whose coefficient
    # block repeats verbatim over the following full period
    n = len(steps)
    for per in range(1, n // 2 + 1):
        for j in range(0, n - 2 * per + 1):
            if (abs(states[j][0] - states[j + per][0]) <= tol
                    and abs(states[j][1] - states[j + per][1]) <= tol
                    and steps[j:j + per] == steps[j + per:j + 2 * per]):
                pre, per = _minimal_rotation(steps, j, per)
                return JpaExpansion(tuple(steps[: pre + per]), pre, per)
    return JpaExpansion(tuple(steps), len(steps), 0,
                        note="float precision exhausted before a verified period")


def jpa_expand(w, max_steps: int = 40, tol: float = 1.0e-9) -> JpaExpansion:
    """Jacobi-Perron expansion of w in (0,1)^2.

    One step maps (w1, w2) to (1/w2 - k, w1/w2 - l) with k = floor(1/w2),
    l = floor(w1/w2).  Exact field elements detect periodicity by exact
    state recurrence; floats by recurrence within tol, verified over a
    second full period (each float step loses about log10(1/w2) digits,
    hence the modest default budget).
    """
    if isinstance(w[0], CubicElement):
        return _jpa_exact(w[0], w[1], max_steps)
    return _jpa_float(float(w[0]), float(w[1]), max_steps, tol)


def field_root(name: str) -> CubicField:
    key = name.lower()
    key = FIELD_ALIASES.get(key, key)
    if key not in FIELDS:
        raise KeyError(f"unknown cubic field {name!r}; "
                       f"known: {sorted(FIELDS)} (aliases {sorted(FIELD_ALIASES)})")
    return FIELDS[key]


def field_variants(name: str) -> list[str]:
    key = FIELD_ALIASES.get(name.lower(), name.lower())
    variants = sorted(_VARIANTS[key])
    if "freq" not in variants:
        variants.append("freq")
    return variants


def cubic_field_vector(name: str, variant: str = "freq"
                       ) -> tuple[FrequencyVector, tuple[CubicElement, CubicElement]]:
    """Tabulated frequency vector of a cubic field, exact and as doubles."""
    fld = field_root(name)
    key = FIELD_ALIASES.get(name.lower(), name.lower())
    table = _VARIANTS[key]
    var = variant.lower()
    if var == "freq" and "freq" not in table:
        var = "a"
    if var not in table:
        raise KeyError(f"unknown variant {variant!r} for field {name!r}; "
                       f"known: {field_variants(name)}")
    (a1, b1, c1), (a2, b2, c2) = table[var]
    e1 = fld.element(a1, b1, c1)
    e2 = fld.element(a2, b2, c2)
    return FrequencyVector(float(e1), float(e2)), (e1, e2)


# SL(3, Z) generators: three transvections that generate the group, plus the
# inverse of the first so random words mix signs.
_SL3_GENERATORS = (
    ((1, 1, 0), (0, 1, 0), (0, 0, 1)),   # I + E12
    ((1, 0, 0), (0, 1, 1), (0, 0, 1)),   # I + E23
    ((1, 0, 0), (0, 1, 0), (1, 0, 1)),   # I + E31
    ((1, -1, 0), (0, 1, 0), (0, 0, 1)),  # I - E12
)


def _matmul3(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
        for i in range(3))


def det3_int(A) -> int:
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


@dataclass(frozen=True)
class IntegralBasisSample:
    omega: FrequencyVector
    exact: tuple[CubicElement, CubicElement]
    matrix: tuple = dc_field(repr=False, default=())
    word: tuple[int, ...] = ()


def random_integral_basis(name: str, word_length: int, seed: int
                          ) -> IntegralBasisSample:
    """Random integral basis of a cubic field, reduced into [0, 1)^2.

    Multiplies the row vector (theta, theta^2, 1) by a random word in the
    SL(3, Z) generators, divides by the third component (never zero, but
    guarded), and reduces mod 1.  All arithmetic is exact: the normalized
    components involve catastrophic cancellation in doubles once the word
    gets long.
    """
    if word_length < 0:
        raise ValueError("word_length must be >= 0")
    fld = field_root(name)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        word = tuple(int(i) for i in rng.integers(0, len(_SL3_GENERATORS),
                                                  word_length))
        A = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for g in word:
            A = _matmul3(A, _SL3_GENERATORS[g])
        # v_j = theta*A[0][j] + theta^2*A[1][j] + A[2][j]
        v = [fld.element(A[2][j], A[0][j], A[1][j]) for j in range(3)]
        if v[2].is_zero():
            continue
        inv = v[2].inverse()
        comps = []
        for j in range(2):
            u = v[j] * inv
            u = u - u.floor()
            comps.append(u)
        return IntegralBasisSample(
            FrequencyVector(float(comps[0]), float(comps[1])),
            (comps[0], comps[1]), A, word)
    raise RuntimeError("failed to draw a usable SL(3,Z) word")
