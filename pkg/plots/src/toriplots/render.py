"""Render a figure recipe from CSV inputs to an image file."""

from __future__ import annotations

import logging
import math
import warnings
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from .recipes import FigureRecipe, read_table

log = logging.getLogger(__name__)

CLASS_COLORS = {"unbounded": "0.8", "chaotic": "tab:red",
                "resonant": "tab:orange", "rotational": "tab:blue"}


def _finite(*cols):
    arrays = [np.asarray(c, dtype=float) for c in cols]
    mask = np.ones(len(arrays[0]), dtype=bool)
    for a in arrays:
        mask &= np.isfinite(a)
    return [a[mask] for a in arrays]


def _mask_rows(cols, mask):
    return {k: [v for v, keep in zip(vals, mask) if keep]
            for k, vals in cols.items()}


def _class_mask(cols, wanted):
    return [c in wanted for c in cols["class"]]


def _plot_phase_slice(ax, cols, opt):
    x1, y = _finite(cols["x1"], cols["y"])
    ax.plot(y, x1, ".", ms=opt.get("markersize", 1.0), color="k", rasterized=True)
    ax.set_xlabel("y")
    ax.set_ylabel("x1")


def _plot_dig_profile(ax, cols, opt):
    y0, dig = _finite(cols["y0"], cols["dig"])
    ax.plot(y0, dig, ".", ms=opt.get("markersize", 2.0))
    ax.axhline(opt.get("cutoff", 11.0), color="0.6", lw=0.8, ls="--")
    ax.set_xlabel("y0")
    ax.set_ylabel("dig")


def _plot_rotation_components(ax, cols, opt):
    sub = _mask_rows(cols, _class_mask(cols, {"resonant", "rotational"}))
    y0, w1, w2 = _finite(sub["y0"], sub["omega1"], sub["omega2"])
    ax.plot(y0, w1, ".", ms=1.5, label="omega1")
    ax.plot(y0, w2, ".", ms=1.5, label="omega2")
    ax.set_xlabel("y0")
    ax.set_ylabel("rotation vector")
    ax.legend(loc="best", fontsize=8)


def _plot_dig_histogram(ax, cols, opt):
    sub = _mask_rows(cols, _class_mask(
        cols, {"chaotic", "resonant", "rotational"}))
    dig = np.asarray(sub["dig"], dtype=float)
    dig = dig[np.isfinite(dig)]
    bins = opt.get("bins", 60)
    lo = opt.get("min", -4.0)
    hi = opt.get("max", 16.5)
    ax.hist(np.clip(dig, lo, hi), bins=bins, range=(lo, hi),
            color="tab:blue", density=True)
    ax.set_xlabel("dig")
    ax.set_ylabel("fraction of bounded orbits")


def _plot_order_histogram(ax, cols, opt):
    M = np.asarray(cols["M"], dtype=float)
    M = M[np.isfinite(M) & (M > 0)]
    ax.hist(np.log10(M), bins=opt.get("bins", 50), color="tab:green",
            density=True)
    ax.axvline(math.log10(opt.get("cutoff", 251)), color="0.4", ls="--", lw=0.8)
    ax.set_xlabel("log10 M")
    ax.set_ylabel("density")


def _plot_proportion_curves(ax, cols, opt):
    eps_vals = sorted(set(cols["eps"]))
    curves = {"bounded": [], "chaotic": [], "resonant": [], "rotational": []}
    for e in eps_vals:
        rows = [c for c, ee in zip(cols["class"], cols["eps"]) if ee == e]
        n = len(rows)
        bounded = sum(c != "unbounded" for c in rows)
        curves["bounded"].append(bounded / n if n else math.nan)
        curves["chaotic"].append(
            sum(c == "chaotic" for c in rows) / bounded if bounded else math.nan)
        nonch = sum(c in ("resonant", "rotational") for c in rows)
        curves["resonant"].append(
            sum(c == "resonant" for c in rows) / nonch if nonch else math.nan)
        curves["rotational"].append(
            sum(c == "rotational" for c in rows) / nonch if nonch else math.nan)
    for name, vals in curves.items():
        ax.plot(eps_vals, vals, "o-", label=name, ms=3)
    ax.set_xlabel("eps")
    ax.set_ylabel("proportion")
    ax.legend(loc="best", fontsize=8)


def _plot_omega_scatter(ax, cols, opt):
    wanted = set(opt.get("classes", ["rotational"]))
    sub = _mask_rows(cols, _class_mask(cols, wanted))
    w1, w2 = _finite(sub["omega1"], sub["omega2"])
    color_by = opt.get("color_by", "eps")
    if color_by == "order":
        M = np.asarray(sub["M"], dtype=float)
        good = np.isfinite(np.asarray(sub["omega1"], dtype=float))
        c = np.log10(np.where(np.isfinite(M) & (M > 0), M, np.nan))[good]
        label = "log10 M"
    else:
        c = np.asarray(sub["eps"], dtype=float)[
            np.isfinite(np.asarray(sub["omega1"], dtype=float))]
        label = "eps"
    sc = ax.scatter(w1, w2, c=c, s=opt.get("size", 1.5), cmap="viridis",
                    rasterized=True)
    plt.colorbar(sc, ax=ax, label=label)
    ax.set_xlim(opt.get("xlim", (0, 1)))
    ax.set_ylim(opt.get("ylim", (0, 1)))
    ax.set_xlabel("omega1")
    ax.set_ylabel("omega2")


def _plot_slice_scatter(ax, cols, opt):
    sub = _mask_rows(cols, _class_mask(cols, {"rotational"}))
    w1, eps = _finite(sub["omega1"], sub["eps"])
    ax.plot(w1, eps, ".", ms=opt.get("markersize", 1.5), rasterized=True)
    ax.set_xlabel("omega1")
    ax.set_ylabel("eps")


def _plot_closeness_curve(ax, cols, opt):
    q, cs = _finite(cols["q"], cols["closeness"])
    ax.plot(np.log10(q), cs, "o-", ms=3)
    ax.set_xlabel("log10 q")
    ax.set_ylabel("c_s")
    ax.set_ylim(bottom=0.0)


def _plot_closeness_histogram(ax, cols, opt):
    cs = np.asarray(cols["closeness"], dtype=float)
    cs = cs[np.isfinite(cs)]
    ax.hist(cs, bins=opt.get("bins", 40), color="tab:purple", density=True)
    ax.set_xlabel("c_s")
    ax.set_ylabel("density")


def _plot_continuation_path(ax, cols, opt):
    fig = ax.figure
    ax2 = fig.add_subplot(1, 2, 2)
    ax.set_position([0.1, 0.12, 0.35, 0.8])
    ax2.set_position([0.6, 0.12, 0.35, 0.8])
    y, d = _finite(cols["y0"], cols["delta"])
    ax.plot(y, d, "o-", ms=3)
    ax.set_xlabel("y")
    ax.set_ylabel("delta")
    eps, dig = _finite(cols["eps"], cols["dig"])
    ax2.plot(eps, dig, "o-", ms=3)
    ax2.set_xlabel("eps")
    ax2.set_ylabel("dig")


_PLOTTERS = {
    "phase_slice": _plot_phase_slice,
    "dig_profile": _plot_dig_profile,
    "rotation_components": _plot_rotation_components,
    "dig_histogram": _plot_dig_histogram,
    "order_histogram": _plot_order_histogram,
    "proportion_curves": _plot_proportion_curves,
    "omega_scatter": _plot_omega_scatter,
    "slice_scatter": _plot_slice_scatter,
    "closeness_curve": _plot_closeness_curve,
    "closeness_histogram": _plot_closeness_histogram,
    "continuation_path": _plot_continuation_path,
}


def render(recipe: FigureRecipe, input_path, output_path) -> int:
    """Render the recipe; returns the number of data rows consumed.

    An empty table renders empty axes with a warning.  Timestamps are
    suppressed so re-rendering the same inputs is byte-identical.
    """
    cols = read_table(input_path, recipe.required_columns)
    n_rows = len(next(iter(cols.values()))) if cols else 0
    log.info("%s: %d rows from %s", recipe.kind, n_rows, input_path)
    if n_rows == 0:
        warnings.warn(f"{input_path}: no data rows; rendering empty axes")
    fig, ax = plt.subplots(figsize=recipe.options.get("figsize", (6.0, 4.5)))
    try:
        if n_rows:
            _PLOTTERS[recipe.kind](ax, cols, recipe.options)
        title = recipe.options.get("title", recipe.name or recipe.kind)
        ax.set_title(title, fontsize=10)
        out = Path(output_path)
        metadata = {"Date": None} if out.suffix == ".svg" else {}
        fig.savefig(out, dpi=recipe.options.get("dpi", 150),
                    metadata=metadata)
    finally:
        plt.close(fig)
    return n_rows
