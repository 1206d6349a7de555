"""Result schemas for experiment runs.

A report holds:
- the config echo and the artifact/schema versions
- one record per instance, numeric fields tagged exact|float (Quantity)
- summary statistics (AggregateStats for float metrics)
- error records for instances or runs that failed
- stage timings, the only part allowed to differ between identical runs

JSON is the source of truth; CSV is a flat projection of the records.
"""

import csv
import io
import json
from fractions import Fraction
from statistics import mean, median, stdev
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, computed_field

from src.config import settings


class Quantity(BaseModel):
    """A tagged number.

    Exact values are integers or "num/den" strings; floats carry the
    tolerance they were computed or compared with (0.0 when reported as is).
    """

    kind: Literal["exact", "float"] = Field(..., description="exact rational or float")
    value: int | str | float = Field(..., description="int, 'num/den' string, or float")
    tolerance: float | None = Field(None, description="Tolerance used for float values")

    @classmethod
    def exact(cls, value: Fraction | int) -> "Quantity":
        value = Fraction(value)
        if value.denominator == 1:
            return cls(kind="exact", value=int(value.numerator))
        return cls(kind="exact", value=f"{value.numerator}/{value.denominator}")

    @classmethod
    def floating(cls, value: float, tolerance: float = 0.0) -> "Quantity":
        return cls(kind="float", value=float(value), tolerance=float(tolerance))

    def as_fraction(self) -> Fraction:
        if self.kind != "exact":
            raise ValueError("float quantity has no exact value")
        return Fraction(self.value)

    def as_float(self) -> float:
        return float(Fraction(self.value)) if self.kind == "exact" else float(self.value)


def quantify(value: Any, tolerance: float = 0.0) -> Any:
    """JSON-ready copy of value with every number wrapped as a Quantity dict."""
    if isinstance(value, Quantity):
        return value.model_dump()
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer, Fraction)):
        return Quantity.exact(int(value) if isinstance(value, np.integer) else value).model_dump()
    if isinstance(value, (float, np.floating)):
        return Quantity.floating(float(value), tolerance).model_dump()
    if isinstance(value, dict):
        return {str(k): quantify(v, tolerance) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [quantify(v, tolerance) for v in value]
    if isinstance(value, BaseModel):
        return quantify(value.model_dump(), tolerance)
    return value


class AggregateStats(BaseModel):
    """Aggregate statistics for a metric across multiple instances.

    Provides comprehensive statistical summary including mean, standard
    deviation, min, max, and median.
    """

    mean: float = Field(..., description="Arithmetic mean of the metric")
    std: float = Field(..., ge=0.0, description="Standard deviation of the metric")
    min: float = Field(..., description="Minimum value observed")
    max: float = Field(..., description="Maximum value observed")
    median: float = Field(..., description="Median (50th percentile) value")
    count: int = Field(..., ge=0, description="Number of instances")

    @classmethod
    def from_values(cls, values: list[float]) -> "AggregateStats":
        """Create aggregate stats from a list of values.

        Raises:
            ValueError: If values is empty
        """
        if not values:
            raise ValueError("Cannot compute aggregate stats from empty list")

        values = [float(v) for v in values]
        return cls(
            mean=mean(values),
            std=stdev(values) if len(values) > 1 else 0.0,
            min=min(values),
            max=max(values),
            median=median(values),
            count=len(values),
        )

    @property
    def std_error(self) -> float:
        return self.std / self.count**0.5 if self.count else 0.0


class ErrorRecord(BaseModel):
    """A failure inside a run; instance is None for run-level failures."""

    instance: int | None = Field(None, description="Instance index, if the failure is per instance")
    error_type: str = Field(..., description="Exception class name")
    message: str = Field(..., description="Exception message")

    @classmethod
    def from_exception(cls, e: Exception, instance: int | None = None) -> "ErrorRecord":
        return cls(instance=instance, error_type=type(e).__name__, message=str(e))


class Report(BaseModel):
    """Complete output of one run."""

    schema_version: str = Field(settings.schema_version, description="Report schema version")
    artifact_version: str = Field(settings.artifact_version, description="Library version")
    command: str = Field(..., description="Command that produced the report")
    config: dict[str, Any] = Field(..., description="Full config echo")
    rng: dict[str, Any] = Field(..., description="Bit generator, seed, and stream layout")
    records: list[dict[str, Any]] = Field(default_factory=list, description="Per-instance records")
    summary: dict[str, Any] = Field(default_factory=dict, description="Summary statistics")
    errors: list[ErrorRecord] = Field(default_factory=list, description="Failures")
    timing_ms: dict[str, float] = Field(default_factory=dict, description="Stage timings")

    @computed_field
    @property
    def success(self) -> bool:
        return not self.errors

    def to_json(self, include_timing: bool = True) -> str:
        data = self.model_dump(mode="json")
        if not include_timing:
            data.pop("timing_ms")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def comparable(self) -> str:
        """The JSON text two identical runs must agree on."""
        return self.to_json(include_timing=False)

    def to_csv(self) -> str:
        """One row per record; Quantity cells hold their value, nested data is JSON."""
        columns: list[str] = []
        for record in self.records:
            for key in record:
                if key not in columns:
                    columns.append(key)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in self.records:
            writer.writerow([_csv_cell(record.get(key)) for key in columns])
        return buffer.getvalue()

    def render(self, fmt: Literal["json", "csv"]) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, dict) and value.keys() >= {"kind", "value"}:
        return str(value["value"])
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)
