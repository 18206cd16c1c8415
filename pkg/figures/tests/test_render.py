import pathlib

import pytest
from PIL import Image

from figrender import SPECS, FigureRecipe, RecipeError, render
from figrender.render import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "golden"

RECIPE_INPUTS = {
    "fig1": ("gamma_surface.csv", "gamma_slice.csv"),
    "fig2": ("snapshots.csv", "traj_moving.csv", "traj_rest.csv"),
    "fig3": ("traj_loc_k0.csv", "traj_loc_kpi2.csv"),
    "fig4": ("continuum_half.csv",),
    "fig5": ("continuum_quarter.csv",),
}


@pytest.mark.parametrize("fid", sorted(RECIPE_INPUTS))
def test_golden_figures_render(fid, tmp_path):
    spec = SPECS[fid]
    out = tmp_path / f"{fid}.png"
    recipe = FigureRecipe(
        figure_id=fid,
        inputs=tuple(str(GOLDEN / name) for name in RECIPE_INPUTS[fid]),
        output=str(out),
    )
    fig = render(recipe)
    assert out.exists()
    with Image.open(out) as img:
        assert img.size == spec.size
    axes = fig.get_axes()
    labeled = [ax for ax in axes if ax.get_xlabel()]  # skip colorbars
    assert len(labeled) == len(spec.axis_labels)
    for ax, (xlabel, ylabel) in zip(labeled, spec.axis_labels):
        assert ax.get_xlabel() == xlabel
        assert ax.get_ylabel() == ylabel


@pytest.mark.parametrize("fid", sorted(RECIPE_INPUTS))
def test_cli_renders(fid, tmp_path):
    out = tmp_path / f"{fid}.png"
    argv = ["--fig", fid, "--in"]
    argv += [str(GOLDEN / name) for name in RECIPE_INPUTS[fid]]
    argv += ["--out", str(out)]
    assert main(argv) == 0
    assert out.exists()


def test_missing_column_reported(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x\n0,1\n")
    out = tmp_path / "out.png"
    code = main(["--fig", "fig4", "--in", str(bad), "--out", str(out)])
    assert code == 1
    assert not out.exists()
    err = capsys.readouterr().err
    assert "missing columns" in err and "mean_x" in err


def test_empty_grid_is_an_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# command=gamma-scan config={}\nu,v,re_gamma,im_gamma,abs_gamma\n")
    out = tmp_path / "out.png"
    code = main(["--fig", "fig1", "--in", str(empty), "--out", str(out)])
    assert code == 1
    assert not out.exists()


def test_unknown_figure_id_rejected():
    with pytest.raises(ValueError):
        FigureRecipe(figure_id="fig9", inputs=("a.csv",), output="x.png")


def test_wrong_input_count_rejected():
    with pytest.raises(ValueError):
        FigureRecipe(figure_id="fig4", inputs=(), output="x.png")


def test_surface_requires_two_dimensional_grid(tmp_path):
    slice_only = GOLDEN / "gamma_slice.csv"
    out = tmp_path / "out.png"
    recipe = FigureRecipe(figure_id="fig1", inputs=(str(slice_only),), output=str(out))
    with pytest.raises(RecipeError):
        render(recipe)
    assert not out.exists()
