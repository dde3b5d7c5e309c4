"""Secondary-component tests: recipes render from real scanner CSV output.

The scanner is consumed strictly through its external interfaces (the
`toriscan` CLI and its documented CSV schemas).
"""

import subprocess
from pathlib import Path

import numpy as np
import pytest

from toriplots import SchemaError, bundled_recipes, load_recipe, render
from toriplots.cli import main as cli_main
from toriplots.recipes import SWEEP_COLUMNS, FigureRecipe, read_table

from conftest import ACCEPTANCE_LINES

REPO_OUTPUTS = Path(__file__).resolve().parents[2] / "outputs"


def report(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def run_scanner(args):
    proc = subprocess.run(["toriscan", "--threads", "2", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def sweep_csv(tmp_path_factory):
    """The reduced acceptance sweep when available, else a quick stand-in."""
    ready = REPO_OUTPUTS / "acceptance_sweep.csv"
    if ready.exists():
        return ready
    out = tmp_path_factory.mktemp("fixtures") / "sweep.csv"
    run_scanner(["sweep", "--n1", "30", "--n2", "30",
                 "--eps", "0.011,0.022,0.033,0.044", "--T", "30000",
                 "--out", str(out)])
    return out


@pytest.fixture(scope="session")
def approx_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures") / "approx.csv"
    run_scanner(["approx", "--field", "D49", "--qmax", "2000",
                 "--out", str(out)])
    return out


@pytest.fixture(scope="session")
def path_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures") / "path.csv"
    run_scanner(["continue", "--omega", "spiral", "--eps-start", "0.0",
                 "--eps-end", "0.004", "--eps-step", "0.002",
                 "--T", "10000", "--out", str(out)])
    return out


@pytest.fixture(scope="session")
def orbit_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures") / "orbit.csv"
    run_scanner(["orbit", "--y0", "0.2", "--delta", "-0.4", "--eps", "0.02",
                 "--T", "2000", "--dump", str(out),
                 "--dump-steps", "20000"])
    return out


class TestRecipes:
    def test_bundled_recipes_load(self):
        recipes = bundled_recipes()
        assert len(recipes) >= 10
        assert "dig_histogram" in recipes and "omega_scatter_eps" in recipes

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            FigureRecipe(kind="starfield")

    def test_load_recipe_file(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text('{"kind": "dig_profile", "options": {"cutoff": 9}}')
        r = load_recipe(p)
        assert r.kind == "dig_profile" and r.options["cutoff"] == 9


class TestRendering:
    def test_all_bundled_recipes_render(self, sweep_csv, approx_csv,
                                        path_csv, orbit_csv, tmp_path):
        inputs = {"sweep": sweep_csv, "approx": approx_csv,
                  "path": path_csv, "orbit": orbit_csv}
        rendered = 0
        for name, recipe in bundled_recipes().items():
            out = tmp_path / f"{name}.png"
            rows = render(recipe, inputs[recipe.source], out)
            assert out.exists() and out.stat().st_size > 0
            assert rows > 0
            rendered += 1
        report("figure regeneration",
               rendered == len(bundled_recipes()),
               f"all {rendered} bundled recipes rendered without error")

    def test_dig_histogram_bimodal(self, sweep_csv, tmp_path):
        out = tmp_path / "dig.png"
        render(bundled_recipes()["dig_histogram"], sweep_csv, out)
        cols = read_table(sweep_csv, SWEEP_COLUMNS)
        dig = np.array(cols["dig"])
        bounded = np.array([c != "unbounded" for c in cols["class"]])
        d = dig[bounded & np.isfinite(dig)]
        hist, edges = np.histogram(np.clip(d, -4, 16.5), bins=60,
                                   range=(-4, 16.5))
        centers = (edges[:-1] + edges[1:]) / 2
        low_mode = centers[np.argmax(np.where(centers <= 8, hist, 0))]
        high_mode = centers[np.argmax(np.where(centers > 8, hist, 0))]
        report("dig histogram modes",
               out.exists() and low_mode <= 6.0 and high_mode >= 12.0,
               f"low mode {low_mode:.2f} <= 6, high mode {high_mode:.2f} >= 12")

    def test_omega_scatter_resonant_gaps(self, sweep_csv, tmp_path):
        out = tmp_path / "scatter.png"
        render(bundled_recipes()["omega_scatter_eps"], sweep_csv, out)
        cols = read_table(sweep_csv, SWEEP_COLUMNS)
        rot = np.array([c == "rotational" for c in cols["class"]])
        w1 = np.array(cols["omega1"])[rot]
        w2 = np.array(cols["omega2"])[rot]
        # the strongest resonance line omega1 = omega2 carves a visible gap
        dline = np.abs(w1 - w2) / np.sqrt(2.0)
        density_in = float(np.mean(dline < 0.01))
        density_flank = float(np.mean((dline > 0.03) & (dline < 0.06))) / 3.0
        report("omega scatter resonant gap",
               out.exists() and rot.sum() > 50
               and density_in < 0.3 * density_flank,
               f"{rot.sum()} tori; density within 0.01 of the line "
               f"{density_in:.4f} < 0.3 x flank {density_flank:.4f}")

    def test_empty_csv_renders_with_warning(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(",".join(SWEEP_COLUMNS) + "\n")
        out = tmp_path / "empty.png"
        with pytest.warns(UserWarning, match="no data rows"):
            rows = render(bundled_recipes()["dig_histogram"], empty, out)
        assert rows == 0
        assert out.exists()

    def test_schema_mismatch_names_column(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("p1,p2,y0\n0,0,0\n")
        with pytest.raises(SchemaError, match="dig"):
            render(bundled_recipes()["dig_profile"], bad, tmp_path / "x.png")

    def test_rerender_byte_identical(self, approx_csv, tmp_path):
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        recipe = bundled_recipes()["closeness_curve"]
        render(recipe, approx_csv, a)
        render(recipe, approx_csv, b)
        assert a.read_bytes() == b.read_bytes()


class TestCli:
    def test_list(self, capsys):
        assert cli_main(["list"]) == 0
        out = capsys.readouterr().out
        assert "dig_histogram" in out

    def test_render_command(self, approx_csv, tmp_path, capsys):
        out = tmp_path / "fig.png"
        rc = cli_main(["render", "closeness_histogram",
                       "--input", str(approx_csv), "--out", str(out)])
        assert rc == 0
        assert out.exists()

    def test_render_schema_error_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        rc = cli_main(["render", "dig_histogram", "--input", str(bad),
                       "--out", str(tmp_path / "x.png")])
        assert rc == 1
        assert "missing column" in capsys.readouterr().err

    def test_missing_file_exit(self, tmp_path):
        rc = cli_main(["render", "dig_histogram",
                       "--input", str(tmp_path / "nope.csv"),
                       "--out", str(tmp_path / "x.png")])
        assert rc == 1
