"""Offline charts over mosp benchmark CSVs.

This package consumes only the documented results-CSV schema; it never
imports the search suite itself.
"""

from .ratio_scatter import PlotConfig, PlotDataError, load_rows, render_ratio_scatter

__all__ = ["PlotConfig", "PlotDataError", "load_rows", "render_ratio_scatter"]
