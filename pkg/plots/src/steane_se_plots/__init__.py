"""Publication-style figures from `steane-se` Monte Carlo sweep CSVs.

This package is deliberately decoupled from the simulator: the only
contract between the two is the CSV schema (`csvio.CSV_HEADER`) and the
`plot` command-line interface.  Rendering is a pure file-to-file
transform — the same CSV always produces a pixel-identical image.
"""

from .csvio import CSV_HEADER, EmptyDataError, SchemaError, SweepRow, read_sweep_csv
from .figures import KINDS, PlotSpec, plot

__all__ = [
    "CSV_HEADER",
    "EmptyDataError",
    "KINDS",
    "PlotSpec",
    "SchemaError",
    "SweepRow",
    "plot",
    "read_sweep_csv",
]
