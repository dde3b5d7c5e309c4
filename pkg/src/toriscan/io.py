"""CSV and JSON-sidecar serialization.

Floats are written with 17 significant digits so a round trip through text
is lossless; every CSV gets a JSON sidecar echoing the fully resolved
configuration, which is enough to reproduce the file byte for byte.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path
from typing import Sequence

from .sweep import GridSpec, OrbitRecord, ROTATIONAL, UNBOUNDED, CHAOTIC
from .birkhoff import WINDOW_OFFSET_CONVENTION
from .resonance import canonical_hit

SWEEP_COLUMNS = ("p1", "p2", "y0", "delta", "eps", "omega1", "omega2",
                 "dig", "M", "class", "m1", "m2", "n")
PATH_COLUMNS = ("eps", "y0", "delta", "omega_err", "dig")


def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


def fmt_opt_int(x) -> str:
    return "" if x is None else str(int(x))


def record_row(r: OrbitRecord) -> list[str]:
    hit = r.hit
    return [
        fmt_float(r.p1), fmt_float(r.p2), fmt_float(r.y0), fmt_float(r.delta),
        fmt_float(r.eps), fmt_float(r.omega[0]), fmt_float(r.omega[1]),
        fmt_float(r.dig), fmt_opt_int(r.M), r.cls,
        fmt_opt_int(hit.m1 if hit else None),
        fmt_opt_int(hit.m2 if hit else None),
        fmt_opt_int(hit.n if hit else None),
    ]


def write_sweep_csv(path, records: Sequence[OrbitRecord]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for r in records:
            writer.writerow(record_row(r))


def read_sweep_csv(path) -> list[dict]:
    rows = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
            raise ValueError(
                f"unexpected columns {reader.fieldnames}; want {SWEEP_COLUMNS}")
        for raw in reader:
            row = {k: raw[k] for k in SWEEP_COLUMNS}
            for k in ("p1", "p2", "y0", "delta", "eps", "omega1", "omega2", "dig"):
                row[k] = float(raw[k])
            for k in ("M", "m1", "m2", "n"):
                row[k] = int(raw[k]) if raw[k] != "" else None
            rows.append(row)
    return rows


def records_from_rows(rows: Sequence[dict]) -> list[OrbitRecord]:
    """Rebuild OrbitRecord objects from typed CSV rows (hits included)."""
    from .vpmap import FrequencyVector

    records = []
    for row in rows:
        hit = None
        if row["m1"] is not None:
            m1, m2, n = row["m1"], row["m2"], row["n"]
            dist = abs(m1 * row["omega1"] + m2 * row["omega2"] - n) \
                / math.hypot(m1, m2)
            hit = canonical_hit(m1, m2, n, dist)
        records.append(OrbitRecord(
            row["p1"], row["p2"], row["y0"], row["delta"], row["eps"],
            FrequencyVector(row["omega1"], row["omega2"]), row["dig"],
            row["M"], row["class"], hit))
    return records


def spec_to_config(spec: GridSpec) -> dict:
    d = dataclasses.asdict(spec)
    d["eps_list"] = list(spec.eps_list)
    return d


def spec_from_config(d: dict) -> GridSpec:
    kwargs = dict(d)
    kwargs["eps_list"] = tuple(float(e) for e in kwargs["eps_list"])
    for key in ("p1_range", "p2_range", "omega_box", "x0"):
        if key in kwargs and kwargs[key] is not None:
            kwargs[key] = tuple(kwargs[key])
    return GridSpec(**kwargs)


def sidecar_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_suffix(p.suffix + ".meta.json")


def write_sidecar(csv_path, command: str, config: dict,
                  runtimes: dict | None = None, **extra) -> Path:
    from . import __version__

    payload = {
        "command": command,
        "config": config,
        "code_version": __version__,
        "window_offset": WINDOW_OFFSET_CONVENTION,
        "float_format": "%.17g",
    }
    payload.update(extra)
    # runtimes vary between identical runs; keep them out of the replay
    # comparison surface by nesting them under their own key
    payload["runtimes"] = runtimes or {}
    out = sidecar_path(csv_path)
    with open(out, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return out


def read_sidecar(csv_path) -> dict:
    with open(sidecar_path(csv_path)) as f:
        return json.load(f)


def check_sweep_file(csv_path) -> list[str]:
    """Re-verify classification invariants of a sweep CSV against its sidecar.

    Checks are pure consistency (no dynamics are recomputed): the class
    partition must match the recorded dig/M and the configured cutoffs, and
    every recorded resonance hit must be canonical and within rho of the
    recorded frequency.
    """
    problems: list[str] = []
    meta = read_sidecar(csv_path)
    spec = spec_from_config(meta["config"])
    box = (spec.omega_box[0] - spec.rho, spec.omega_box[1] + spec.rho,
           spec.omega_box[2] - spec.rho, spec.omega_box[3] + spec.rho)
    rows = read_sweep_csv(csv_path)
    for i, row in enumerate(rows, start=2):  # header is line 1
        cls = row["class"]
        w1, w2 = row["omega1"], row["omega2"]
        diverged = math.isnan(w1) or math.isnan(w2)
        in_box = (not diverged and box[0] <= w1 <= box[1]
                  and box[2] <= w2 <= box[3])
        if (cls == UNBOUNDED) != (not in_box):
            problems.append(f"line {i}: class {cls} inconsistent with omega box")
            continue
        if cls == UNBOUNDED:
            continue
        if cls == CHAOTIC:
            if not row["dig"] <= spec.dig_cutoff:
                problems.append(f"line {i}: chaotic but dig > cutoff")
            continue
        if not row["dig"] > spec.dig_cutoff:
            problems.append(f"line {i}: {cls} but dig <= cutoff")
        M = row["M"]
        if cls == ROTATIONAL:
            if M is not None and M <= spec.m_cutoff:
                problems.append(f"line {i}: rotational but M <= cutoff")
        else:
            if M is None or M > spec.m_cutoff:
                problems.append(f"line {i}: resonant but M > cutoff")
        if M is not None:
            m1, m2, n = row["m1"], row["m2"], row["n"]
            if m1 is None or m2 is None or n is None:
                problems.append(f"line {i}: M recorded without a hit")
                continue
            if abs(m1) + abs(m2) != M:
                problems.append(f"line {i}: |m|_1 != M")
            canon = canonical_hit(m1, m2, n, 0.0)
            if (canon.m1, canon.m2, canon.n) != (m1, m2, n):
                problems.append(f"line {i}: hit not in canonical sign form")
            dist = abs(m1 * w1 + m2 * w2 - n) / math.hypot(m1, m2)
            if not dist <= spec.rho * (1 + 1e-9):
                problems.append(f"line {i}: hit distance {dist:.3g} > rho")
    return problems
