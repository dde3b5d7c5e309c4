"""Figure recipes: a kind, its options, and the CSV schema it consumes.

A recipe plus its input files fully determines the image; recipes carry no
absolute paths so the bundled set can be pointed at any compatible CSV.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

# columns required per input role
SWEEP_COLUMNS = ("p1", "p2", "y0", "delta", "eps", "omega1", "omega2",
                 "dig", "M", "class", "m1", "m2", "n")
APPROX_COLUMNS = ("p1", "p2", "q", "znorm", "closeness")
PATH_COLUMNS = ("eps", "y0", "delta", "omega_err", "dig")
ORBIT_COLUMNS = ("t", "x1", "x2", "y")

# figure kind -> (input role, required columns)
KIND_SOURCES = {
    "phase_slice": ("orbit", ORBIT_COLUMNS),
    "dig_profile": ("sweep", SWEEP_COLUMNS),
    "rotation_components": ("sweep", SWEEP_COLUMNS),
    "dig_histogram": ("sweep", SWEEP_COLUMNS),
    "order_histogram": ("sweep", SWEEP_COLUMNS),
    "proportion_curves": ("sweep", SWEEP_COLUMNS),
    "omega_scatter": ("sweep", SWEEP_COLUMNS),
    "slice_scatter": ("sweep", SWEEP_COLUMNS),
    "closeness_curve": ("approx", APPROX_COLUMNS),
    "closeness_histogram": ("approx", APPROX_COLUMNS),
    "continuation_path": ("path", PATH_COLUMNS),
}


class SchemaError(ValueError):
    """Input CSV does not provide the columns a recipe needs."""


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    options: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.kind not in KIND_SOURCES:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"known: {sorted(KIND_SOURCES)}")

    @property
    def source(self) -> str:
        return KIND_SOURCES[self.kind][0]

    @property
    def required_columns(self) -> tuple[str, ...]:
        return KIND_SOURCES[self.kind][1]


def load_recipe(path) -> FigureRecipe:
    with open(path) as f:
        data = json.load(f)
    return FigureRecipe(kind=data["kind"], options=data.get("options", {}),
                        name=data.get("name", Path(path).stem))


def bundled_recipes() -> dict[str, FigureRecipe]:
    out = {}
    base = resources.files("toriplots").joinpath("recipes")
    for entry in sorted(base.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            data = json.loads(entry.read_text())
            name = entry.name[:-5]
            out[name] = FigureRecipe(kind=data["kind"],
                                     options=data.get("options", {}),
                                     name=name)
    return out


def read_table(path, required: tuple[str, ...]) -> dict[str, list]:
    """CSV into per-column lists; floats where possible, else strings."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        names = tuple(reader.fieldnames or ())
        missing = [c for c in required if c not in names]
        if missing:
            raise SchemaError(
                f"{path}: missing column(s) {', '.join(missing)}")
        cols: dict[str, list] = {c: [] for c in names}
        for row in reader:
            for c in names:
                v = row[c]
                if c == "class":
                    cols[c].append(v)
                    continue
                if v == "":
                    cols[c].append(math.nan)
                    continue
                try:
                    cols[c].append(float(v))
                except ValueError:
                    cols[c].append(v)
    return cols
