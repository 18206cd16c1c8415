"""Figure recipes: what each figure id needs and how it must look.

A recipe never computes physics; every plotted number is a CSV cell
produced by the drivenlattice CLI.  The SPECS table is the contract the
tests check rendered output against (canvas size, axis labels, inputs).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FigureRecipe:
    """One rendering job: figure id, input CSV paths, output image path."""

    figure_id: str
    inputs: tuple
    output: str

    def __post_init__(self):
        if self.figure_id not in SPECS:
            raise ValueError(
                f"unknown figure id {self.figure_id!r}; known: {sorted(SPECS)}"
            )
        spec = SPECS[self.figure_id]
        if not spec.n_inputs[0] <= len(self.inputs) <= spec.n_inputs[1]:
            raise ValueError(
                f"{self.figure_id} takes {spec.n_inputs[0]}..{spec.n_inputs[1]} "
                f"input CSVs, got {len(self.inputs)}"
            )


@dataclass(frozen=True)
class FigureSpec:
    """Layout contract for one figure id."""

    n_inputs: tuple          # (min, max) number of input CSVs
    columns: tuple           # required columns, per input position
    size: tuple              # (width_px, height_px)
    dpi: int
    axis_labels: tuple       # ((xlabel, ylabel), ...) per panel


_TRAJ = ("t", "mean_n", "var_n", "norm")
_SCAN = ("u", "v", "re_gamma", "im_gamma", "abs_gamma")
_CONT = ("t", "mean_x", "var_x", "norm")

SPECS = {
    # transport-coefficient surface over (u, v) plus a fixed-v slice
    "fig1": FigureSpec(
        n_inputs=(1, 2),
        columns=(_SCAN, _SCAN),
        size=(1080, 420),
        dpi=120,
        axis_labels=(("u", "v"), ("u", "re_gamma")),
    ),
    # greyscale packet density next to position traces with gamma*t dashed
    "fig2": FigureSpec(
        n_inputs=(2, 3),
        columns=(("t", "l", "abs2"), _TRAJ, _TRAJ),
        size=(1080, 420),
        dpi=120,
        axis_labels=(("t", "l"), ("t", "mean_n")),
    ),
    # dynamic localization: position and width traces for two launches
    "fig3": FigureSpec(
        n_inputs=(2, 2),
        columns=(_TRAJ, _TRAJ),
        size=(1080, 420),
        dpi=120,
        axis_labels=(("t", "mean_n"), ("t", "var_n")),
    ),
    # continuum shuttle drift, half-period flips
    "fig4": FigureSpec(
        n_inputs=(1, 1),
        columns=(_CONT,),
        size=(720, 480),
        dpi=120,
        axis_labels=(("t", "mean_x"),),
    ),
    # continuum drift for the doubled period, quarter duty
    "fig5": FigureSpec(
        n_inputs=(1, 1),
        columns=(_CONT,),
        size=(720, 480),
        dpi=120,
        axis_labels=(("t", "mean_x"),),
    ),
}
