"""Presentational figure scripts for toriscan CSV outputs.

Strictly a consumer: every plot is a declarative recipe applied to CSV files
produced by the scanner CLI; nothing dynamical is recomputed here.
"""

import matplotlib

matplotlib.use("Agg")

__version__ = "0.1.0"

from .recipes import FigureRecipe, SchemaError, bundled_recipes, load_recipe
from .render import render

__all__ = ["FigureRecipe", "SchemaError", "bundled_recipes", "load_recipe",
           "render", "__version__"]
