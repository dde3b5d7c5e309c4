"""toriplots: render figure recipes from scanner CSV files.

Exit codes: 0 success (including empty input, with a warning), 1 schema
mismatch or missing file, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .recipes import SchemaError, bundled_recipes, load_recipe
from .render import render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="toriplots", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list bundled recipes")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("render", help="render one recipe")
    p.add_argument("recipe",
                   help="bundled recipe name or path to a recipe JSON")
    p.add_argument("--input", required=True, help="input CSV")
    p.add_argument("--out", required=True, help="output image (png/svg)")
    p.set_defaults(func=_cmd_render)

    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SchemaError as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        return 1


def _cmd_list(args) -> int:
    for name, recipe in bundled_recipes().items():
        print(f"{name:24s} kind={recipe.kind:20s} input={recipe.source}")
    return 0


def _cmd_render(args) -> int:
    recipes = bundled_recipes()
    if args.recipe in recipes:
        recipe = recipes[args.recipe]
    else:
        recipe = load_recipe(args.recipe)
    rows = render(recipe, args.input, args.out)
    print(f"rendered {args.out} from {rows} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main())
