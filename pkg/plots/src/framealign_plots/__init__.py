"""Figure rendering for framealign result CSVs."""

from .render import KINDS, PlotJob, SchemaError, render

__version__ = "0.1.0"
