"""Experiment reports and their schemas."""

from evals.results.schemas import (
    AggregateStats,
    ErrorRecord,
    Quantity,
    Report,
    quantify,
)

__all__ = [
    "AggregateStats",
    "ErrorRecord",
    "Quantity",
    "Report",
    "quantify",
]
