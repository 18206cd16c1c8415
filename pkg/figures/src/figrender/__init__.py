"""Figures from drivenlattice CSV output (no physics recomputed)."""

from .recipes import SPECS, FigureRecipe, FigureSpec
from .render import RecipeError, load_csv, render

__version__ = "0.1.0"
