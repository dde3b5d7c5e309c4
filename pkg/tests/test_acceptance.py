"""Acceptance suite: every exit criterion at its stated tolerance.

Each criterion prints one [PASS]/[FAIL] line (echoed in the terminal summary)
and asserts both its tolerances and its runtime budget.
"""

import math
import time

import numpy as np
import pytest

from toriscan import io
from toriscan.birkhoff import make_weight_plan, rotation_vector_with_dig
from toriscan.cli import main as cli_main
from toriscan.continuation import ContinuationConfig, locate_critical_eps, solve_torus
from toriscan.numtheory import best_approximants, cubic_field_vector, jpa_expand
from toriscan.resonance import order_statistics, resonance_order
from toriscan.sweep import (GridSpec, RefineConfig, classify_orbit,
                            refine_peak, sweep_grid)
from toriscan.vpmap import MapParams, PhaseState, resonance_locus_y

from conftest import ACCEPTANCE_LINES
from oracles import rigid_rotation_samples

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def report(name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# ---------------------------------------------------------------- criterion 1

# minimal resonance orders and canonical hits for (1/s, 1/s^2), one row per
# decade of precision
TABLE2 = {
    1: (2, 0, 2, 1), 2: (4, 4, 0, 3), 3: (10, 7, 3, 7), 4: (25, -10, 15, 1),
    5: (49, -9, 40, 16), 6: (96, 7, 89, 56), 7: (208, 171, -37, 108),
    8: (387, 316, 71, 279), 9: (1119, -350, 769, 174),
    10: (2064, -176, 1888, 943), 11: (4306, 3952, 354, 3185),
    12: (10322, 6783, 3539, 7137), 13: (24301, 10676, -13625, 295),
    14: (48897, -10971, 37926, 13330),
}


def test_criterion_resonance_order_ladder(spiral_sq):
    t0 = time.perf_counter()
    bad = []
    for j, expected in TABLE2.items():
        res = resonance_order(spiral_sq, 10.0 ** (-j))
        got = (res.M, res.hit.m1, res.hit.m2, res.hit.n)
        if got != expected:
            bad.append((j, got, expected))
    dt = time.perf_counter() - t0
    report("resonance-order ladder",
           not bad and dt <= 120.0,
           f"14 rows exact down to rho=1e-14, {dt:.1f}s <= 120s"
           + (f"; mismatches {bad}" if bad else ""))


# ---------------------------------------------------------------- criterion 2

# printed best-approximant table for (A^2-1, A-1), A = 2 cos(2 pi / 7)
TABLE5_PRINTED = [
    (1, 0, 1, 0.445041867912628, 0.198062264195161),
    (2, 1, 3, 0.335125603737885, 0.336927510842046),
    (2, 1, 4, 0.219832528349486, 0.193305362082111),
    (7, 3, 13, 0.214455717135830, 0.597886309959160),
    (9, 4, 16, 0.120669886602055, 0.232979544520846),
    (11, 5, 20, 0.099162641747430, 0.196664590366583),
    (36, 16, 65, 0.072278585679150, 0.339572606605588),
    (45, 20, 81, 0.048391300922901, 0.189679158405874),
    (146, 65, 263, 0.046011261021278, 0.556780505022018),
    (182, 81, 328, 0.026267324657880, 0.226310929055850),
    (227, 101, 409, 0.022123976265050, 0.200193363242583),
    (737, 328, 1328, 0.015600587970539, 0.323206442195226),
    (919, 409, 1656, 0.010666736687313, 0.188418473697497),
    (2984, 1328, 5377, 0.009876233796604, 0.524472547765830),
    (3721, 1656, 6705, 0.005724354173708, 0.219710986884052),
    (4640, 2065, 8361, 0.004942382513946, 0.204235358627254),
    (15066, 6705, 27148, 0.003369907963133, 0.308300280752348),
    (18787, 8361, 33853, 0.002354446209210, 0.187661294078270),
    (61001, 27148, 109920, 0.002120956116414, 0.494470156865191),
    (76067, 33853, 137068, 0.001248951841262, 0.213809728033248),
]

# independently computed exact values (60-digit arithmetic oracle, frozen);
# the printed table's own last digits drift up to ~5e-11 at large q because
# it was generated from a trig-rounded double frequency
TABLE5_EXACT = [
    (1, 1, 0, 0.44504186791262879, 0.19806226419516174),
    (3, 2, 1, 0.33512560373788641, 0.33692751084204864),
    (4, 2, 1, 0.21983252834948477, 0.19330536208210811),
    (13, 7, 3, 0.21445571713582548, 0.5978863099591355),
    (16, 9, 4, 0.12066988660206093, 0.23297954452086794),
    (20, 11, 5, 0.099162641747423827, 0.19666459036655845),
    (65, 36, 16, 0.072278585679127441, 0.33957260660537281),
    (81, 45, 20, 0.048391300922933492, 0.18967915840612623),
    (263, 146, 65, 0.046011261021376655, 0.556780505024418),
    (328, 182, 81, 0.026267324657750786, 0.22631092905362385),
    (409, 227, 101, 0.022123976265182709, 0.20019336324498843),
    (1328, 737, 328, 0.015600587971057791, 0.32320644221672296),
    (1656, 919, 409, 0.010666736686692995, 0.18841847367560918),
    (5377, 2984, 1328, 0.0098762337948962772, 0.5244725475844938),
    (6705, 3721, 1656, 0.0057243541761615143, 0.21971098707239373),
    (8361, 4640, 2065, 0.0049423825105314812, 0.2042353583450868),
    (27148, 15066, 6705, 0.0033699079531047298, 0.30830027891739475),
    (33853, 18787, 8361, 0.0023544462230567845, 0.187661296285518),
    (109920, 61001, 27148, 0.0021209561586388722, 0.4944701765533483),
    (137068, 76067, 33853, 0.0012489517944658573, 0.21380971201100266),
]


def test_criterion_best_approximants(d49_freq):
    _, exact = d49_freq
    t0 = time.perf_counter()
    recs = best_approximants(exact, 140_000)
    dt = time.perf_counter() - t0
    ok = len(recs) == 20
    dev_exact = 0.0
    dev_zn = 0.0
    dev_cs = 0.0
    for rec, printed, truth in zip(recs, TABLE5_PRINTED, TABLE5_EXACT):
        p1, p2, q, zn_p, cs_p = printed
        qt, p1t, p2t, zn_t, cs_t = truth
        ok &= rec.q == q == qt and rec.p == (p1, p2) == (p1t, p2t)
        dev_exact = max(dev_exact, abs(rec.znorm - zn_t),
                        abs(rec.closeness - cs_t))
        dev_zn = max(dev_zn, abs(rec.znorm - zn_p))
        dev_cs = max(dev_cs, abs(rec.closeness - cs_p))
    ok &= dev_exact <= 1e-12          # stated tolerance, against exact values
    # the published digits carry an O(q)*ulp drift from a trig-rounded
    # frequency: ~5e-11 in the pseudo-norm, amplified to ~2e-8 in c_s
    ok &= dev_zn <= 1.2e-10 and dev_cs <= 3e-8
    ok &= dt <= 5.0
    report("best approximants",
           ok,
           f"20 rows, q/p exact, |value-exact| <= {dev_exact:.1e} (tol 1e-12), "
           f"|znorm-printed| <= {dev_zn:.1e}, |c_s-printed| <= {dev_cs:.1e}, "
           f"{dt:.2f}s <= 5s")


# ---------------------------------------------------------------- criterion 3

# ground-truth expansions established by exact field arithmetic (see
# tests/test_numtheory.py for the full table and the two repairs of the
# published rows: the permuted spiral period opens with (3,0) since
# 1/(s-1) = s^2 + s, and the last two d49 labels are swapped)
JPA_EXPECTED = {
    ("spiral", "a"): ((), ((1, 0), (2, 0))),
    ("spiral", "b"): (((3, 2),), ((3, 0), (4, 0))),
    ("d31", "a"): ((), ((1, 0),)),
    ("d31", "b"): (((2, 1),), ((2, 0), (3, 0))),
    ("d44", "a"): ((), ((1, 1),)),
    ("d44", "b"): (((1, 0), (1, 0), (3, 1)),
                   ((1, 0), (2, 0), (2, 0), (2, 0), (1, 0), (4, 0))),
    ("d49", "a"): ((), ((1, 0), (3, 0))),
    ("d49", "c"): (((1, 0), (2, 1)), ((1, 0), (3, 0))),
    ("d49", "freq"): (((4, 2),), ((4, 0), (5, 0))),
}


def test_criterion_jpa_expansions():
    t0 = time.perf_counter()
    bad = []
    for (field, variant), (pre, per) in JPA_EXPECTED.items():
        _, exact = cubic_field_vector(field, variant)
        exp = jpa_expand(exact, max_steps=60)
        if exp.preperiod != pre or exp.period != per:
            bad.append((field, variant, exp.preperiod, exp.period))
    dt = time.perf_counter() - t0
    report("Jacobi-Perron expansions",
           not bad and dt <= 1.0,
           f"all {len(JPA_EXPECTED)} expansions exact, {dt:.2f}s <= 1s"
           + (f"; mismatches {bad}" if bad else ""))


# ---------------------------------------------------------------- criterion 4

LOCI = [((1, 1), 1, -0.481), ((1, -1), 0, -0.164), ((1, 1), 1, -0.019),
        ((1, 0), 1, 0.382), ((2, -1), 0, -0.317), ((0, 2), 1, -0.224),
        ((2, 0), 1, -0.118), ((2, -1), 1, 0.090), ((2, 1), 2, 0.157),
        ((0, 2), 1, 0.224), ((1, 2), 2, 0.276), ((1, 1), 2, 0.494)]


def test_criterion_resonance_loci():
    bad = []
    for m, n, y_expected in LOCI:
        roots = resonance_locus_y(m, n, -0.4)
        if min(abs(r - y_expected) for r in roots) >= 5e-4:
            bad.append((m, n, y_expected, roots))
    report("low-order resonance loci",
           not bad,
           "12 tabulated action values matched to 5e-4"
           + (f"; mismatches {bad}" if bad else ""))


# ---------------------------------------------------------------- criterion 5

def test_criterion_order_statistics():
    t0 = time.perf_counter()
    rhos = [10.0 ** (-j) for j in range(2, 10)]  # 1e-2 .. 1e-9
    stats = order_statistics(2000, rhos, seed=20260808, threads=2)
    dt = time.perf_counter() - t0
    mean9 = [m for rho, m, _ in stats.rows if rho == 1e-9][0]
    # the fitted slope uses the 1e-2..1e-8 decades
    sub = [(math.log10(r), m) for r, m, _ in stats.rows if r >= 1e-8]
    slope = np.polyfit([x for x, _ in sub], [y for _, y in sub], 1)[0]
    ok = abs(mean9 - 2.92) <= 0.05 and abs(slope - (-0.334)) <= 0.02
    ok &= dt <= 600.0
    report("order statistics",
           ok,
           f"mean log10 M(1e-9) = {mean9:.3f} (2.92 +- 0.05), "
           f"slope = {slope:.4f} (-0.334 +- 0.02), {dt:.0f}s <= 600s")


# ---------------------------------------------------------------- criterion 6

def test_criterion_superconvergence():
    t0 = time.perf_counter()
    T = 10 ** 4
    h = rigid_rotation_samples(0.1, GOLDEN, T)
    plan = make_weight_plan(T)
    weighted = abs(float(np.sum(plan.weights * h)))
    plain = abs(float(np.mean(h)))
    dt = time.perf_counter() - t0
    ok = weighted <= 1e-10 and plain >= 1e-5 and dt <= 1.0
    report("superconvergent averaging",
           ok,
           f"weighted {weighted:.2e} <= 1e-10, plain {plain:.2e} >= 1e-5, "
           f"{dt:.2f}s <= 1s")


# ---------------------------------------------------------------- criterion 7

def test_criterion_chaos_separation():
    t0 = time.perf_counter()
    p = MapParams(delta=-0.4, eps=0.02)
    T = 10 ** 6
    dig_regular = rotation_vector_with_dig(PhaseState(0, 0, 0.2), p, T).dig
    dig_chaotic = rotation_vector_with_dig(PhaseState(0, 0, -0.5), p, T).dig
    # 200-point scan: chaos dominates below y ~ -0.41 (interrupted by the
    # genuine resonant islands there, e.g. the order-two tube near -0.48),
    # while tori and resonances dominate 0 <= y < 0.27
    spec = GridSpec(eps_list=(0.02,), T=T)
    ys = np.linspace(-0.7, 0.5, 200)
    from toriscan.sweep import _classify_arrays
    w1, w2, dig, cls, M, hits = _classify_arrays(
        ys, np.full(200, -0.4), np.full(200, 0.02), spec, threads=2)
    d = np.where(np.isnan(dig), -99.0, dig)
    frac_chaotic_band = float(np.mean(d[ys < -0.41] < 11.0))
    frac_regular_mid = float(np.mean(d[(ys >= 0.0) & (ys < 0.27)] > 11.0))
    dt = time.perf_counter() - t0
    ok = (dig_regular >= 13.0 and dig_chaotic <= 6.0
          and frac_chaotic_band >= 0.65 and frac_regular_mid >= 0.7
          and dt <= 60.0)
    report("chaos/regular separation",
           ok,
           f"dig(0.2) = {dig_regular:.2f} >= 13, dig(-0.5) = {dig_chaotic:.2f}"
           f" <= 6, chaotic fraction below -0.41: {frac_chaotic_band:.2f} >= "
           f"0.65, regular fraction in [0, 0.27): {frac_regular_mid:.2f} >= "
           f"0.7, {dt:.0f}s <= 60s")


# ---------------------------------------------------------------- criterion 8

@pytest.fixture(scope="module")
def reduced_sweep(artifacts_dir):
    spec = GridSpec(eps_list=(0.0, 0.011, 0.022, 0.033, 0.044, 0.055),
                    n1=50, n2=50, T=10 ** 5)
    t0 = time.perf_counter()
    result = sweep_grid(spec, threads=2)
    dt = time.perf_counter() - t0
    csv_path = artifacts_dir / "acceptance_sweep.csv"
    io.write_sweep_csv(csv_path, result.records)
    io.write_sidecar(csv_path, "sweep", io.spec_to_config(spec),
                     runtimes={"sweep_s": dt}, summary=result.summary)
    return result, dt


def test_criterion_bounded_fraction_at_zero(reduced_sweep):
    result, dt = reduced_sweep
    frac0 = result.summary[0]["frac_bounded"]
    # stated value inherits the published 1/1.1 ~ 0.91 figure; the buffer is
    # two-dimensional, so the attainable value is (1/1.1)^2 ~ 0.826 (exactly
    # 44^2/50^2 = 0.7744 on this endpoint-inclusive grid)
    ok = abs(frac0 - 0.91) <= 0.02 and dt <= 1200.0
    report("bounded fraction at eps=0",
           ok,
           f"frac = {frac0:.4f} vs stated 0.91 +- 0.02 (sweep {dt:.0f}s)")


def test_criterion_bounded_fraction_at_top(reduced_sweep):
    result, dt = reduced_sweep
    frac0 = result.summary[0]["frac_bounded"]
    frac_top = result.summary[-1]["frac_bounded"]
    ok = frac_top <= 0.25 and frac0 > frac_top and dt <= 1200.0
    report("bounded fraction at eps=0.055",
           ok,
           f"frac = {frac_top:.4f} <= 0.25 (and below the eps=0 value "
           f"{frac0:.4f}), sweep {dt:.0f}s <= 1200s")


def test_criterion_chaotic_fraction_peak(reduced_sweep):
    result, _ = reduced_sweep
    curve = [(row["eps"], row["frac_chaotic_of_bounded"])
             for row in result.summary]
    peak_eps = max(curve, key=lambda t: t[1])[0]
    ok = 0.02 <= peak_eps <= 0.04
    report("chaotic fraction peak",
           ok,
           f"peak of chaotic|bounded curve at eps = {peak_eps:g} in [0.02, 0.04]; "
           + ", ".join(f"{e:g}:{f:.3f}" for e, f in curve))


# ---------------------------------------------------------------- criterion 9

def test_criterion_critical_eps_spiral():
    t0 = time.perf_counter()
    w, _ = cubic_field_vector("spiral", "a")
    cfg = ContinuationConfig(T=10 ** 6, bracket_tol=1e-6, eps_step=4e-3)
    res = locate_critical_eps(w, cfg, eps_start=4e-3)
    dt = time.perf_counter() - t0
    d_eps = abs(res.eps_c - 0.025731358271922)
    d_y = abs(res.y_c - (-0.300341913511639))
    d_delta = abs(res.delta_c - (-0.581991952776833))
    # bracket validity, re-verified with fresh solves on both edges (the
    # upper edge may have been widened once across the dig plateau)
    lo_pt = solve_torus(w, res.bracket[0], (res.y_c, res.delta_c), cfg)
    hi_pt = solve_torus(w, res.bracket[1], (res.y_c, res.delta_c), cfg)
    ok = (d_eps <= 1e-3 and d_y <= 5e-3 and d_delta <= 5e-3
          and lo_pt.torus and not hi_pt.torus and dt <= 1800.0)
    report("critical eps by continuation",
           ok,
           f"eps_c = {res.eps_c:.9f} (|d| = {d_eps:.1e} <= 1e-3), "
           f"|dy| = {d_y:.1e}, |ddelta| = {d_delta:.1e} <= 5e-3, "
           f"bracket width {res.bracket[1] - res.bracket[0]:.2e}, edge "
           f"validity lo={lo_pt.torus}/hi={not hi_pt.torus}, {dt:.0f}s <= 1800s")


# --------------------------------------------------------------- criterion 10

def test_criterion_refine_quadrant_two():
    t0 = time.perf_counter()
    spec = GridSpec(eps_list=(0.0,), T=10 ** 5)
    cfg = RefineConfig(region=(0.5, 1.0, 0.0, 0.5), eps_start=0.01,
                       d_eps0=0.002, coarse_n=30, fine_n=10,
                       halt_box=1e-6, probe_eps=1e-8, max_steps=220)
    peak = refine_peak(spec, cfg, threads=2)
    dt = time.perf_counter() - t0
    d_w1 = abs(peak.omega[0] - 0.7344)
    d_w2 = abs(peak.omega[1] - 0.3654)
    # invariants: a rotational torus lives at the returned point, none in the
    # terminal box just above it
    at_peak = classify_orbit(peak.y0, peak.delta, peak.eps_c, spec)
    above = []
    if peak.box is not None:
        from toriscan.sweep import _dynamical_survivors
        fn = _dynamical_survivors(spec, cfg.region, 2)
        above = fn(("box", peak.box), peak.eps_c + cfg.probe_eps, cfg.fine_n)
    ok = (0.045 <= peak.eps_c <= 0.055 and d_w1 <= 0.02 and d_w2 <= 0.02
          and at_peak.cls == "rotational" and not above and dt <= 2700.0)
    report("quadrant-II peak refinement",
           ok,
           f"eps_c = {peak.eps_c:.6f} in [0.045, 0.055], "
           f"omega = ({peak.omega[0]:.4f}, {peak.omega[1]:.4f}) within 0.02, "
           f"torus at peak: {at_peak.cls}, none above: {not above}, "
           f"complete={peak.complete}, {dt:.0f}s <= 2700s")


# --------------------------------------------------------------- criterion 11

def test_criterion_deterministic_replay(tmp_path):
    out1 = tmp_path / "run1.csv"
    out2 = tmp_path / "run2.csv"
    rc1 = cli_main(["--threads", "1", "sweep", "--n1", "12", "--n2", "12",
                    "--eps", "0.0,0.02,0.04", "--T", "20000",
                    "--out", str(out1)])
    rc2 = cli_main(["--threads", "2", "sweep",
                    "--config", str(io.sidecar_path(out1)),
                    "--out", str(out2)])
    identical = out1.read_bytes() == out2.read_bytes()
    ok = rc1 == 0 and rc2 == 0 and identical
    report("deterministic replay",
           ok,
           f"432-cell sweep replayed from sidecar at a different thread "
           f"count: byte-identical = {identical}")
