"""Static figure rendering for eitfluct CSV outputs."""

__version__ = "0.1.0"

from .recipes import RECIPES, FigureRecipe, PlotkitError, load_table, render

__all__ = ["RECIPES", "FigureRecipe", "PlotkitError", "load_table", "render",
           "__version__"]
