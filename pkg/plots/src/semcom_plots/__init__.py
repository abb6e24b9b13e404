"""Deterministic figure rendering for semcom experiment CSVs.

This package never simulates anything: it consumes the CSV artifacts the
producer writes and renders one PNG+SVG pair per figure spec.
"""

from .errors import HeaderMismatchError, PlotsError, SpecError
from .figures import PlotSpec, build_figure, load_specs, render
from .tables import KINDS, Table, classify_columns, read_table

__version__ = "0.1.0"

__all__ = [
    "HeaderMismatchError",
    "KINDS",
    "PlotsError",
    "PlotSpec",
    "SpecError",
    "Table",
    "build_figure",
    "classify_columns",
    "load_specs",
    "read_table",
    "render",
    "__version__",
]
