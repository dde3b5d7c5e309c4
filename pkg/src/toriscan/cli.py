"""Command-line surface: orbit probes, sweeps, refinement, continuation and
number-theory queries, all with reproducible config sidecars.

Exit codes: 0 success, 1 failed --check, 2 bad arguments, 3 numeric failure.

Default cutoffs (documented on every subcommand that uses them):
  * window length T = 1e6 per averaging window (2T iterates per orbit);
  * an orbit is nonchaotic when its two-window digit agreement dig > 11;
  * its frequency is nonresonant when the minimal resonance order at
    precision rho = 1e-9 exceeds 251 = 10^2.4;
  * frequencies outside the unit box are treated as unbounded orbits.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import __version__, _kernels, io
from ._parallel import THREADS_ENV_VAR, default_threads
from .continuation import (ContinuationConfig, continue_torus,
                           locate_critical_eps)
from .numtheory import best_approximants, cubic_field_vector, jpa_expand
from .resonance import order_statistics, resonance_order
from .sweep import (GridSpec, RefineConfig, classify_orbit, critical_set_bins,
                    cross_section, refine_peak, sweep_grid)
from .vpmap import FrequencyVector, Y_DIVERGENCE_LIMIT

log = logging.getLogger("toriscan")

QUADRANTS = {
    "I": (0.0, 0.5, 0.0, 0.5),
    "II": (0.5, 1.0, 0.0, 0.5),
    "III": (0.0, 0.5, 0.5, 1.0),
    "IV": (0.5, 1.0, 0.5, 1.0),
}


def parse_omega(spec: str):
    """Frequency from 'w1,w2' floats or a field spec like 'D49', 'spiral-sq'."""
    if "," in spec:
        w1, w2 = (float(v) for v in spec.split(","))
        return FrequencyVector(w1, w2), None, spec
    parts = spec.split("-", 1)
    # allow forms like d-44-a by retrying the full name as a field first
    try:
        w, exact = cubic_field_vector(spec, "freq")
        return w, exact, f"{spec}-freq"
    except KeyError:
        pass
    if len(parts) == 2:
        w, exact = cubic_field_vector(parts[0], parts[1])
        return w, exact, spec
    raise ValueError(f"cannot parse omega spec {spec!r}")


def _add_classify_args(p: argparse.ArgumentParser, T_default=10 ** 6):
    p.add_argument("--T", type=int, default=T_default,
                   help="iterates per averaging window (2T per orbit)")
    p.add_argument("--dig-cutoff", type=float, default=11.0,
                   help="dig above this is nonchaotic (default 11)")
    p.add_argument("--rho", type=float, default=1e-9,
                   help="resonance precision (default 1e-9)")
    p.add_argument("--m-cutoff", type=int, default=251,
                   help="resonance order above this is nonresonant (default 251)")


def _spec_from_args(args, eps_list) -> GridSpec:
    return GridSpec(
        eps_list=tuple(eps_list), n1=args.n1, n2=args.n2, T=args.T,
        dig_cutoff=args.dig_cutoff, rho=args.rho, m_cutoff=args.m_cutoff)


def _parse_eps_list(args) -> list[float]:
    if args.eps:
        return [float(v) for v in args.eps.split(",")]
    if args.eps_count < 1:
        raise ValueError("--eps-count must be >= 1")
    return list(np.linspace(args.eps_min, args.eps_max, args.eps_count))


def _record_line(r) -> str:
    parts = [f"class={r.cls}",
             f"omega=({io.fmt_float(r.omega[0])},{io.fmt_float(r.omega[1])})",
             f"dig={r.dig:.3f}"]
    if r.M is not None:
        parts.append(f"M={r.M}")
        if r.hit is not None:
            parts.append(f"m=({r.hit.m1},{r.hit.m2}) n={r.hit.n}")
    return " ".join(parts)


def cmd_orbit(args) -> int:
    spec = GridSpec(eps_list=(args.eps,), T=args.T,
                    dig_cutoff=args.dig_cutoff, rho=args.rho,
                    m_cutoff=args.m_cutoff)
    rec = classify_orbit(args.y0, args.delta, args.eps, spec)
    print(_record_line(rec))
    if args.dump:
        xs1, xs2, ys, nfill = _kernels.orbit_points(
            args.x1, args.x2, args.y0, args.delta, args.eps,
            spec.gamma, spec.beta, spec.a, spec.b, spec.c,
            args.dump_steps, Y_DIVERGENCE_LIMIT)
        import csv as _csv
        kept = 0
        with open(args.dump, "w", newline="") as f:
            w = _csv.writer(f, lineterminator="\n")
            w.writerow(("t", "x1", "x2", "y"))
            for t in range(nfill):
                if abs(xs2[t] - round(xs2[t])) <= args.slice_halfwidth:
                    w.writerow((t, io.fmt_float(xs1[t]), io.fmt_float(xs2[t]),
                                io.fmt_float(ys[t])))
                    kept += 1
        io.write_sidecar(args.dump, "orbit-dump", {
            "y0": args.y0, "delta": args.delta, "eps": args.eps,
            "x1": args.x1, "x2": args.x2, "dump_steps": args.dump_steps,
            "slice_halfwidth": args.slice_halfwidth,
        }, rows=kept)
        print(f"wrote {kept} slice points to {args.dump}")
    return 0


def cmd_sweep(args) -> int:
    if args.check:
        problems = io.check_sweep_file(args.check)
        for p in problems:
            print(f"CHECK FAIL {p}")
        print(f"checked {args.check}: {len(problems)} problem(s)")
        return 1 if problems else 0
    if args.config:
        with open(args.config) as f:
            meta = json.load(f)
        spec = io.spec_from_config(meta["config"])
    else:
        spec = _spec_from_args(args, _parse_eps_list(args))
    t0 = time.perf_counter()
    result = sweep_grid(spec, threads=args.threads)
    dt = time.perf_counter() - t0
    io.write_sweep_csv(args.out, result.records)
    io.write_sidecar(args.out, "sweep", io.spec_to_config(spec),
                     runtimes={"sweep_s": dt, "threads": args.threads},
                     summary=result.summary)
    for row in result.summary:
        print(f"eps={row['eps']:g} bounded={row['frac_bounded']:.4f} "
              f"chaotic|bounded={row['frac_chaotic_of_bounded']:.4f} "
              f"rotational={row['rotational']}")
    print(f"wrote {len(result.records)} records to {args.out}")
    return 0


def cmd_slice(args) -> int:
    if args.check:
        problems = io.check_sweep_file(args.check)
        for p in problems:
            print(f"CHECK FAIL {p}")
        return 1 if problems else 0
    spec = GridSpec(eps_list=(0.0,), T=args.T, dig_cutoff=args.dig_cutoff,
                    rho=args.rho, m_cutoff=args.m_cutoff)
    t0 = time.perf_counter()
    result = cross_section(args.delta, args.ny, (args.y_min, args.y_max),
                           args.neps, (args.eps_min, args.eps_max), spec,
                           threads=args.threads)
    dt = time.perf_counter() - t0
    io.write_sweep_csv(args.out, result.records)
    io.write_sidecar(args.out, "slice", io.spec_to_config(result.spec),
                     runtimes={"slice_s": dt, "threads": args.threads},
                     slice={"delta": args.delta, "ny": args.ny,
                            "y_range": [args.y_min, args.y_max],
                            "neps": args.neps,
                            "eps_range": [args.eps_min, args.eps_max]})
    n_rot = sum(r.cls == "rotational" for r in result.records)
    print(f"wrote {len(result.records)} records ({n_rot} rotational) to {args.out}")
    return 0


def _bins_rows(table) -> list[tuple]:
    return [(e.i, e.j, io.fmt_float(e.eps_c), io.fmt_float(e.y0),
             io.fmt_float(e.delta), io.fmt_float(e.omega[0]),
             io.fmt_float(e.omega[1])) for e in table.entries]


def cmd_bins(args) -> int:
    rows = io.read_sweep_csv(args.input)
    records = io.records_from_rows(rows)
    table = critical_set_bins(records, bin_size=args.bin_size)
    if args.check:
        import csv as _csv
        with open(args.check, newline="") as f:
            existing = [tuple(r) for r in _csv.reader(f)][1:]
        fresh = [tuple(str(v) for v in row) for row in _bins_rows(table)]
        ok = existing == fresh
        print(f"checked {args.check}: "
              f"{'ok' if ok else 'MISMATCH against recomputed bins'}")
        return 0 if ok else 1
    import csv as _csv
    with open(args.out, "w", newline="") as f:
        w = _csv.writer(f, lineterminator="\n")
        w.writerow(("bin_i", "bin_j", "eps_c", "y0", "delta",
                    "omega1", "omega2"))
        for row in _bins_rows(table):
            w.writerow(row)
    count = table.count_above(args.eps_threshold)
    io.write_sidecar(args.out, "bins",
                     {"input": str(args.input), "bin_size": args.bin_size,
                      "eps_threshold": args.eps_threshold},
                     bins=len(table.entries), above_threshold=count)
    print(f"{len(table.entries)} bins, {count} with eps_c > {args.eps_threshold:g}")
    return 0


def cmd_refine(args) -> int:
    if args.check:
        return _check_refine(args.check)
    region = QUADRANTS[args.quadrant] if args.quadrant else \
        tuple(float(v) for v in args.region.split(","))
    spec = GridSpec(eps_list=(0.0,), T=args.T, dig_cutoff=args.dig_cutoff,
                    rho=args.rho, m_cutoff=args.m_cutoff)
    cfg = RefineConfig(region=region, eps_start=args.eps_start,
                       d_eps0=args.d_eps0, coarse_n=args.grid,
                       fine_n=args.fine_grid, halt_box=args.halt_box,
                       probe_eps=args.probe, max_steps=args.max_steps)
    t0 = time.perf_counter()
    peak = refine_peak(spec, cfg, threads=args.threads)
    dt = time.perf_counter() - t0
    import csv as _csv
    with open(args.out, "w", newline="") as f:
        w = _csv.writer(f, lineterminator="\n")
        w.writerow(("eps_c", "y0", "delta", "omega1", "omega2",
                    "complete", "steps"))
        w.writerow((io.fmt_float(peak.eps_c), io.fmt_float(peak.y0),
                    io.fmt_float(peak.delta), io.fmt_float(peak.omega[0]),
                    io.fmt_float(peak.omega[1]), int(peak.complete),
                    peak.steps))
    io.write_sidecar(args.out, "refine", {
        "region": list(region), "spec": io.spec_to_config(spec),
        "refine": {"eps_start": cfg.eps_start, "d_eps0": cfg.d_eps0,
                   "coarse_n": cfg.coarse_n, "fine_n": cfg.fine_n,
                   "halt_box": cfg.halt_box, "probe_eps": cfg.probe_eps,
                   "max_steps": cfg.max_steps},
    }, runtimes={"refine_s": dt},
        box=list(peak.box) if peak.box else None)
    status = "complete" if peak.complete else "incomplete"
    print(f"peak ({status}): eps_c={io.fmt_float(peak.eps_c)} "
          f"y={io.fmt_float(peak.y0)} delta={io.fmt_float(peak.delta)} "
          f"omega=({peak.omega[0]:.6f},{peak.omega[1]:.6f})")
    return 0


def _check_refine(path) -> int:
    """Re-verify the peak invariants: a rotational torus at the returned
    point, and none in the terminal box just above eps_c."""
    import csv as _csv
    from .sweep import _dynamical_survivors

    meta = io.read_sidecar(path)
    spec = io.spec_from_config(meta["config"]["spec"])
    region = tuple(meta["config"]["region"])
    probe = meta["config"]["refine"]["probe_eps"]
    fine_n = meta["config"]["refine"]["fine_n"]
    with open(path, newline="") as f:
        row = list(_csv.DictReader(f))[0]
    eps_c = float(row["eps_c"])
    problems = []
    rec = classify_orbit(float(row["y0"]), float(row["delta"]), eps_c, spec)
    if rec.cls != "rotational":
        problems.append(f"returned point classifies {rec.cls}, not rotational")
    if not (region[0] <= rec.omega[0] <= region[1]
            and region[2] <= rec.omega[1] <= region[3]):
        problems.append("returned frequency left the search region")
    box = meta.get("box")
    if box and row["complete"] == "1":
        # only a completed search claims isolation above eps_c
        fn = _dynamical_survivors(spec, region, None)
        above = fn(("box", tuple(box)), eps_c + probe, fine_n)
        if above:
            problems.append(f"{len(above)} tori survive at eps_c + probe")
    elif row["complete"] != "1":
        print("note: incomplete search; isolation above eps_c not claimed")
    for p in problems:
        print(f"CHECK FAIL {p}")
    print(f"checked {path}: {len(problems)} problem(s)")
    return 1 if problems else 0


def _check_continuation(path) -> int:
    """Static invariants of a continuation path file."""
    import csv as _csv

    meta = io.read_sidecar(path)
    tol = meta["config"]["residual_tol"]
    cutoff = meta["config"]["dig_cutoff"]
    problems = []
    with open(path, newline="") as f:
        rows = list(_csv.DictReader(f))
    eps_seq = [float(r["eps"]) for r in rows]
    if eps_seq != sorted(eps_seq):
        problems.append("eps column not ascending")
    for i, r in enumerate(rows, start=2):
        if not float(r["omega_err"]) < tol:
            problems.append(f"line {i}: omega_err >= residual tolerance")
        if not float(r["dig"]) > cutoff:
            problems.append(f"line {i}: dig at or below the cutoff")
    for p in problems:
        print(f"CHECK FAIL {p}")
    print(f"checked {path}: {len(problems)} problem(s)")
    return 1 if problems else 0


def cmd_continue(args) -> int:
    if args.check:
        return _check_continuation(args.check)
    if not args.omega:
        raise ValueError("--omega is required unless --check is given")
    omega, _, label = parse_omega(args.omega)
    cfg = ContinuationConfig(T=args.T, dig_cutoff=args.dig_cutoff,
                             eps_step=args.eps_step,
                             residual_tol=args.residual_tol,
                             bracket_tol=args.bracket_tol)
    t0 = time.perf_counter()
    bracket = None
    if args.critical:
        result = locate_critical_eps(omega, cfg, eps_start=args.eps_start)
        points = result.path
    else:
        points, bracket = continue_torus(omega, args.eps_start, args.eps_end,
                                         cfg)
        result = None
    dt = time.perf_counter() - t0
    import csv as _csv
    with open(args.out, "w", newline="") as f:
        w = _csv.writer(f, lineterminator="\n")
        w.writerow(io.PATH_COLUMNS)
        for p in points:
            w.writerow((io.fmt_float(p.eps), io.fmt_float(p.y0),
                        io.fmt_float(p.delta), io.fmt_float(p.omega_err),
                        io.fmt_float(p.dig)))
    io.write_sidecar(args.out, "continue", {
        "omega": [omega[0], omega[1]], "omega_spec": label,
        "T": cfg.T, "dig_cutoff": cfg.dig_cutoff,
        "residual_tol": cfg.residual_tol, "eps_step": cfg.eps_step,
        "bracket_tol": cfg.bracket_tol, "eps_start": args.eps_start,
        "eps_end": args.eps_end, "critical": bool(args.critical),
    }, runtimes={"continue_s": dt},
        failure_bracket=list(bracket) if bracket else None)
    if result is not None:
        summary = {
            "omega_star": [result.omega_star[0], result.omega_star[1]],
            "omega_spec": label,
            "eps_c": result.eps_c,
            "y_c": result.y_c,
            "delta_c": result.delta_c,
            "bracket": list(result.bracket),
        }
        crit_path = str(args.out) + ".critical.json"
        with open(crit_path, "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write("\n")
        print(f"eps_c={io.fmt_float(result.eps_c)} at "
              f"y={io.fmt_float(result.y_c)} delta={io.fmt_float(result.delta_c)} "
              f"(bracket width {result.bracket[1] - result.bracket[0]:.3g})")
    print(f"wrote {len(points)} continuation points to {args.out}")
    return 0


def cmd_resorder(args) -> int:
    if args.check:
        meta = io.read_sidecar(args.check)
        omega = meta["config"]["omega"]
        result = resonance_order(omega, meta["config"]["rho"],
                                 m_max=meta["config"]["m_max"])
        import csv as _csv
        with open(args.check, newline="") as f:
            row = list(_csv.DictReader(f))[0]
        hit = result.hit
        ok = (result.found and int(row["M"]) == result.M
              and (int(row["m1"]), int(row["m2"]), int(row["n"]))
              == (hit.m1, hit.m2, hit.n))
        print(f"checked {args.check}: {'ok' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    if not args.omega:
        raise ValueError("--omega is required unless --check is given")
    omega, _, label = parse_omega(args.omega)
    result = resonance_order(omega, args.rho, m_max=args.m_max)
    if not result.found:
        print(f"no resonance found up to order {args.m_max}")
        return 0
    hit = result.hit
    print(f"M={result.M} m=({hit.m1},{hit.m2}) n={hit.n}")
    if args.out:
        import csv as _csv
        with open(args.out, "w", newline="") as f:
            w = _csv.writer(f, lineterminator="\n")
            w.writerow(("rho", "M", "m1", "m2", "n", "distance"))
            w.writerow((io.fmt_float(args.rho), result.M, hit.m1, hit.m2,
                        hit.n, io.fmt_float(hit.distance)))
        io.write_sidecar(args.out, "resorder", {
            "omega": [omega[0], omega[1]], "omega_spec": label,
            "rho": args.rho, "m_max": args.m_max})
    return 0


def cmd_resstats(args) -> int:
    rhos = [float(v) for v in args.rhos.split(",")]
    stats = order_statistics(args.samples, rhos, args.seed,
                             threads=args.threads)
    import csv as _csv
    with open(args.out, "w", newline="") as f:
        w = _csv.writer(f, lineterminator="\n")
        w.writerow(("rho", "mean_log10M", "std_log10M"))
        for rho, mean, std in stats.rows:
            w.writerow((io.fmt_float(rho), io.fmt_float(mean),
                        io.fmt_float(std)))
    io.write_sidecar(args.out, "resstats", {
        "samples": args.samples, "rhos": rhos, "seed": args.seed,
    }, slope=stats.slope, intercept=stats.intercept)
    print(f"fit: mean log10 M = {stats.slope:.4f} log10 rho + {stats.intercept:.4f}")
    return 0


def cmd_approx(args) -> int:
    omega, exact, label = parse_omega(args.omega)
    t0 = time.perf_counter()
    records = best_approximants(exact if exact is not None else omega,
                                args.qmax, input_precision=args.precision)
    dt = time.perf_counter() - t0
    if args.check:
        rows = []
        with open(args.check, newline="") as f:
            import csv as _csv
            rd = _csv.DictReader(f)
            rows = list(rd)
        ok = len(rows) == len(records) and all(
            int(row["q"]) == rec.q and int(row["p1"]) == rec.p[0]
            and int(row["p2"]) == rec.p[1]
            and abs(float(row["znorm"]) - rec.znorm) < 1e-14
            for row, rec in zip(rows, records))
        print(f"checked {args.check}: {'ok' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    import csv as _csv
    with open(args.out, "w", newline="") as f:
        w = _csv.writer(f, lineterminator="\n")
        w.writerow(("p1", "p2", "q", "znorm", "closeness"))
        for rec in records:
            w.writerow((rec.p[0], rec.p[1], rec.q, io.fmt_float(rec.znorm),
                        io.fmt_float(rec.closeness)))
    meta = {"omega": [omega[0], omega[1]], "omega_spec": label,
            "qmax": args.qmax}
    if args.precision is not None:
        meta["input_precision"] = args.precision
        meta["qmax_bound"] = 1e-4 / args.precision
    io.write_sidecar(args.out, "approx", meta,
                     runtimes={"approx_s": dt}, periods=len(records))
    for rec in records:
        print(f"{rec.p[0]:>8d} {rec.p[1]:>8d} {rec.q:>9d} "
              f"{rec.znorm:.15f} {rec.closeness:.15f}")
    return 0


def cmd_jpa(args) -> int:
    if args.check:
        with open(args.check) as f:
            saved = json.load(f)
        omega, exact, _ = parse_omega(saved["omega_spec"]) \
            if saved.get("omega_spec") else (saved["omega"], None, "")
        target = exact if exact is not None and not saved.get("float") \
            else tuple(saved["omega"])
        exp = jpa_expand(target, max_steps=saved["max_steps"])
        ok = ([list(s) for s in exp.steps] == saved["steps"]
              and exp.preperiod_len == saved["preperiod_len"]
              and exp.period_len == saved["period_len"])
        print(f"checked {args.check}: {'ok' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    if not args.omega:
        raise ValueError("--omega or --field is required unless --check is given")
    if args.float:
        omega, _, _ = parse_omega(args.omega)
        exp = jpa_expand(omega, max_steps=args.max_steps)
    else:
        _, exact, _ = parse_omega(args.omega)
        if exact is None:
            raise ValueError("exact mode needs a field spec; "
                             "use --float for numeric omega")
        exp = jpa_expand(exact, max_steps=args.max_steps)
    pre = ",".join(f"({k},{l})" for k, l in exp.preperiod)
    per = ",".join(f"({k},{l})" for k, l in exp.period)
    if exp.terminated:
        print(f"{pre} terminated (rational direction)")
    elif exp.period_len:
        prefix = f"{pre} " if pre else ""
        print(f"{prefix}[{per}] periodic")
    else:
        note = exp.note or "no period detected"
        print(f"{pre} ... ({note})")
    if args.out:
        omega, _, label = parse_omega(args.omega)
        with open(args.out, "w") as f:
            json.dump({"steps": [list(s) for s in exp.steps],
                       "preperiod_len": exp.preperiod_len,
                       "period_len": exp.period_len,
                       "terminated": exp.terminated,
                       "note": exp.note,
                       "omega": [omega[0], omega[1]],
                       "omega_spec": label,
                       "float": bool(args.float),
                       "max_steps": args.max_steps}, f, indent=2,
                      sort_keys=True)
            f.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toriscan",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--threads", type=int, default=None,
                    help=f"worker threads (default ${THREADS_ENV_VAR} or CPU count)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="classify a single orbit")
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--x1", type=float, default=0.0)
    p.add_argument("--x2", type=float, default=0.0)
    _add_classify_args(p)
    p.add_argument("--dump", help="write a phase-space slice CSV here")
    p.add_argument("--dump-steps", type=int, default=100_000)
    p.add_argument("--slice-halfwidth", type=float, default=0.005,
                   help="keep points with x2 within this of an integer")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("sweep", help="classify a full (p1, p2) x eps grid")
    p.add_argument("--n1", type=int, default=100)
    p.add_argument("--n2", type=int, default=100)
    p.add_argument("--eps", help="comma-separated eps list")
    p.add_argument("--eps-min", type=float, default=0.005)
    p.add_argument("--eps-max", type=float, default=0.055)
    p.add_argument("--eps-count", type=int, default=50)
    _add_classify_args(p)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--config", help="replay a run from its sidecar config")
    p.add_argument("--check", help="re-verify invariants of an existing CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("slice", help="fixed-delta cross section over (y0, eps)")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--ny", type=int, default=1000)
    p.add_argument("--y-min", type=float, default=-0.05 - 0.6180339887498949)
    p.add_argument("--y-max", type=float, default=1.05 - 0.6180339887498949)
    p.add_argument("--neps", type=int, default=500)
    p.add_argument("--eps-min", type=float, default=0.0015)
    p.add_argument("--eps-max", type=float, default=0.055)
    _add_classify_args(p)
    p.add_argument("--out", default="slice.csv")
    p.add_argument("--check")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("bins", help="max-eps rotational torus per omega bin")
    p.add_argument("--input", required=True, help="sweep/slice CSV")
    p.add_argument("--bin-size", type=float, default=0.01)
    p.add_argument("--eps-threshold", type=float, default=0.02)
    p.add_argument("--out", default="bins.csv")
    p.add_argument("--check", help="recompute from --input and compare")
    p.set_defaults(func=cmd_bins)

    p = sub.add_parser("refine", help="adaptive peak search in an omega region")
    p.add_argument("--region", help="w1lo,w1hi,w2lo,w2hi")
    p.add_argument("--quadrant", choices=sorted(QUADRANTS))
    p.add_argument("--eps-start", type=float, default=0.01)
    p.add_argument("--d-eps0", type=float, default=0.002)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--fine-grid", type=int, default=10)
    p.add_argument("--halt-box", type=float, default=1e-12)
    p.add_argument("--probe", type=float, default=1e-14)
    p.add_argument("--max-steps", type=int, default=500)
    _add_classify_args(p)
    p.add_argument("--out", default="peak.csv")
    p.add_argument("--check", help="re-verify peak invariants of an output file")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("continue",
                       help="fixed-omega continuation in eps; --critical "
                            "bisects the breakup threshold")
    p.add_argument("--omega",
                   help="'w1,w2' or field spec like spiral, D49-freq, d44-b")
    p.add_argument("--eps-start", type=float, default=2e-3)
    p.add_argument("--eps-end", type=float, default=0.03)
    p.add_argument("--eps-step", type=float, default=2e-3)
    p.add_argument("--T", type=int, default=10 ** 6)
    p.add_argument("--dig-cutoff", type=float, default=11.0)
    p.add_argument("--residual-tol", type=float, default=1e-11)
    p.add_argument("--bracket-tol", type=float, default=1e-9)
    p.add_argument("--critical", action="store_true")
    p.add_argument("--out", default="continuation.csv")
    p.add_argument("--check", help="re-verify invariants of a path file")
    p.set_defaults(func=cmd_continue)

    p = sub.add_parser("resorder", help="minimal resonance order of omega")
    p.add_argument("--omega")
    p.add_argument("--rho", type=float, default=1e-9)
    p.add_argument("--m-max", type=int, default=10 ** 6)
    p.add_argument("--out", help="optionally write the hit as CSV + sidecar")
    p.add_argument("--check", help="recompute and compare an output file")
    p.set_defaults(func=cmd_resorder)

    p = sub.add_parser("resstats",
                       help="resonance-order statistics for random omega")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--rhos", default="1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8,1e-9")
    p.add_argument("--seed", type=int, default=20260808)
    p.add_argument("--out", default="resstats.csv")
    p.set_defaults(func=cmd_resstats)

    p = sub.add_parser("approx", help="best simultaneous approximants")
    p.add_argument("--omega", help="'w1,w2' or field spec", default="D49")
    p.add_argument("--field", help="alias for --omega (field name)")
    p.add_argument("--variant")
    p.add_argument("--qmax", type=int, default=140_000)
    p.add_argument("--precision", type=float,
                   help="declared uncertainty of omega; bounds qmax")
    p.add_argument("--out", default="approx.csv")
    p.add_argument("--check", help="recompute and compare an existing CSV")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("jpa", help="Jacobi-Perron expansion")
    p.add_argument("--omega", help="'w1,w2' (with --float) or field spec")
    p.add_argument("--field", help="alias for --omega (field name)")
    p.add_argument("--variant")
    p.add_argument("--float", action="store_true",
                   help="expand in doubles instead of exact field arithmetic")
    p.add_argument("--max-steps", type=int, default=40)
    p.add_argument("--out")
    p.add_argument("--check", help="recompute and compare a saved expansion")
    p.set_defaults(func=cmd_jpa)

    return ap


def _resolve_field_alias(args) -> None:
    if getattr(args, "field", None):
        variant = getattr(args, "variant", None) or "freq"
        args.omega = f"{args.field}-{variant}"
    elif getattr(args, "variant", None) and getattr(args, "omega", None) \
            and "," not in args.omega and "-" not in args.omega:
        args.omega = f"{args.omega}-{args.variant}"


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    if args.threads is None:
        args.threads = default_threads()
    _resolve_field_alias(args)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FloatingPointError, ZeroDivisionError, OverflowError,
            RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
