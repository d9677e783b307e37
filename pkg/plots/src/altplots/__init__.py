"""Batch plotting for concurrence sweep CSVs.

Consumes only the CSV column contract of the sweep tool; performs no
physics computation of its own.
"""

from altplots.figspec import FigureSpec, PanelSpec, CurveSource, PlotError
from altplots.csvdata import CSV_COLUMNS, read_rows
from altplots.render import render, preset_spec, PRESETS

__all__ = [
    "FigureSpec", "PanelSpec", "CurveSource", "PlotError",
    "CSV_COLUMNS", "read_rows",
    "render", "preset_spec", "PRESETS",
]

__version__ = "0.1.0"
