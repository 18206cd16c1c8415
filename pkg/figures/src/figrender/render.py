"""Render drivenlattice CSV outputs into publication-style images.

Strictly presentation: every plotted value is read from a CSV cell.
Greyscale density panels use log10 of the density with a 1e-8 floor,
matching the visual dynamic range of localized-versus-moving packets.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import SPECS, FigureRecipe

DENSITY_FLOOR = 1e-8


class RecipeError(RuntimeError):
    """Input CSV does not satisfy the recipe."""


def load_csv(path: str, required: tuple) -> dict:
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise RecipeError(f"{path}: empty file")
    header = lines[0].split(",")
    missing = [c for c in required if c not in header]
    if missing:
        raise RecipeError(
            f"{path}: missing columns {missing}; found {header}"
        )
    if len(lines) == 1:
        raise RecipeError(f"{path}: no data rows")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    cols = {name: data[:, i] for i, name in enumerate(header)}
    cols["__header__"] = header
    return cols


def _grey_density(ax, table):
    t = table["t"]
    l = table["l"]
    dens = np.maximum(table["abs2"], DENSITY_FLOOR)
    ts = np.unique(t)
    ls = np.arange(int(l.min()), int(l.max()) + 1)
    grid = np.full((ls.size, ts.size), np.log10(DENSITY_FLOOR))
    t_index = {v: i for i, v in enumerate(ts)}
    for ti, li, di in zip(t, l, np.log10(dens)):
        grid[int(li) - ls[0], t_index[ti]] = di
    ax.pcolormesh(ts, ls, grid, cmap="gray_r", shading="nearest", rasterized=True)


def _surface(ax, table):
    us = np.unique(table["u"])
    vs = np.unique(table["v"])
    grid = np.full((vs.size, us.size), np.nan)
    ui = {v: i for i, v in enumerate(us)}
    vi = {v: i for i, v in enumerate(vs)}
    for u, v, re in zip(table["u"], table["v"], table["re_gamma"]):
        grid[vi[v], ui[u]] = re
    if vs.size < 2 or us.size < 2:
        raise RecipeError("fig1 surface input needs a 2-D (u, v) grid")
    mesh = ax.pcolormesh(us, vs, grid, cmap="RdBu_r", shading="nearest")
    return mesh


def render(recipe: FigureRecipe):
    """Build the figure and write the image; returns the matplotlib figure."""
    spec = SPECS[recipe.figure_id]
    tables = [
        load_csv(path, spec.columns[min(i, len(spec.columns) - 1)])
        for i, path in enumerate(recipe.inputs)
    ]
    width, height = spec.size
    fig, axes = plt.subplots(
        1, len(spec.axis_labels),
        figsize=(width / spec.dpi, height / spec.dpi), dpi=spec.dpi,
    )
    axes = np.atleast_1d(axes)

    fid = recipe.figure_id
    if fid == "fig1":
        mesh = _surface(axes[0], tables[0])
        fig.colorbar(mesh, ax=axes[0], label="re_gamma")
        slice_table = tables[1] if len(tables) > 1 else tables[0]
        vs = slice_table["v"]
        pick = vs == vs[len(vs) // 2] if len(tables) == 1 else slice(None)
        axes[1].plot(slice_table["u"][pick], slice_table["re_gamma"][pick], "k-")
        axes[1].axhline(0.0, color="0.7", lw=0.8)
    elif fid == "fig2":
        _grey_density(axes[0], tables[0])
        styles = ("k-", "k-.")
        for table, style in zip(tables[1:], styles):
            axes[1].plot(table["t"], table["mean_n"], style)
        if "gamma_t" in tables[1]["__header__"]:
            axes[1].plot(tables[1]["t"], tables[1]["gamma_t"], "k--")
    elif fid == "fig3":
        for table, style in zip(tables, ("k-", "k-.")):
            axes[0].plot(table["t"], table["mean_n"], style)
            axes[1].plot(table["t"], table["var_n"], style)
    else:  # fig4 / fig5
        axes[0].plot(tables[0]["t"], tables[0]["mean_x"], "k.-")

    for ax, (xlabel, ylabel) in zip(axes, spec.axis_labels):
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(recipe.output, dpi=spec.dpi)
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figure", description="render drivenlattice CSVs to images"
    )
    parser.add_argument("--fig", required=True, choices=sorted(SPECS))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        recipe = FigureRecipe(
            figure_id=args.fig, inputs=tuple(args.inputs), output=args.out
        )
        render(recipe)
    except (RecipeError, ValueError, OSError) as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
