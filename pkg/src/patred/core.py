"""Ingestion, normalization, windowing, and the shared point-set representation.

Everything downstream (redundancy, rasterization, metrics) operates on
:class:`PointSet`, a bag of points in the unit square with the original,
un-augmented points kept at the front of the array so they can always be
recovered exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataFormatError, ValidationError


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued observations, optionally labeled (e.g. with dates)."""

    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) < 2:
            raise ValidationError("a time series needs at least 2 values")
        if not np.all(np.isfinite(values)):
            raise ValidationError("time series values must be finite")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != len(values):
                raise ValidationError(
                    f"{len(labels)} labels for {len(values)} values"
                )

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Pattern:
    """A short exemplar shape, normalized to the unit square.

    x must be strictly increasing; construction rescales x to [0, 1] and
    min-max normalizes y (a constant sketch maps to y = 0.5).
    """

    points: np.ndarray
    name: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValidationError("a pattern needs at least 2 (x, y) points")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("pattern coordinates must be finite")
        if np.any(np.diff(pts[:, 0]) <= 0):
            raise ValidationError("pattern x coordinates must be strictly increasing")
        x = pts[:, 0]
        x = (x - x[0]) / (x[-1] - x[0])
        y = normalize_minmax(pts[:, 1])
        object.__setattr__(self, "points", np.column_stack([x, y]))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def values(self) -> np.ndarray:
        return self.points[:, 1]

    def resample(self, count: int) -> "Pattern":
        """Linearly interpolate to ``count`` points at uniform x spacing."""
        if count < 2:
            raise ValidationError("resample count must be at least 2")
        xs = np.linspace(0.0, 1.0, count)
        ys = np.interp(xs, self.points[:, 0], self.points[:, 1])
        return Pattern(np.column_stack([xs, ys]), name=self.name)


@dataclass(frozen=True)
class PointSet:
    """Points in the unit square; the first ``origin_count`` rows are the
    un-augmented source points in x order."""

    points: np.ndarray
    origin_count: int = field(default=-1)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "points", pts)
        if self.origin_count < 0:
            object.__setattr__(self, "origin_count", len(pts))
        if self.origin_count > len(pts):
            raise ValidationError("origin_count exceeds point count")
        if len(pts) and (pts.min() < 0.0 or pts.max() > 1.0):
            raise ValidationError("point coordinates must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def origin_points(self) -> np.ndarray:
        return self.points[: self.origin_count]


def parse_csv_text(text: str, value_column: str | None = None,
                   origin: str = "<csv>") -> TimeSeries:
    """Parse one numeric column of headered CSV text into a TimeSeries.

    ``value_column`` defaults to the last column; the first column is
    kept as labels when it differs from the value column. Errors name
    the offending row and column.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise DataFormatError(f"{origin}: empty input, header row required")
    if value_column is None:
        value_column = reader.fieldnames[-1]
    elif value_column not in reader.fieldnames:
        raise DataFormatError(
            f"{origin}: no column {value_column!r} "
            f"(columns: {', '.join(reader.fieldnames)})"
        )
    label_column = next(
        (c for c in reader.fieldnames if c != value_column), None
    )
    values: list[float] = []
    labels: list[str] = []
    for i, row in enumerate(reader, start=2):
        cell = row.get(value_column)
        if cell is None or cell.strip() == "":
            raise DataFormatError(
                f"{origin}: empty cell at row {i}, column {value_column!r}"
            )
        try:
            values.append(float(cell))
        except ValueError:
            raise DataFormatError(
                f"{origin}: non-numeric cell {cell!r} at row {i}, "
                f"column {value_column!r}"
            ) from None
        if label_column is not None:
            labels.append(row.get(label_column) or "")
    if len(values) < 2:
        raise DataFormatError(f"{origin}: too short, need at least 2 data rows")
    return TimeSeries(
        np.array(values), tuple(labels) if label_column is not None else None
    )


def load_csv(path: str | Path, value_column: str | None = None) -> TimeSeries:
    """Read one numeric column of a headered CSV file into a TimeSeries."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"no such file: {path}")
    return parse_csv_text(path.read_text(), value_column, origin=str(path))


def load_pattern_csv(path: str | Path, name: str = "") -> Pattern:
    """Read a pattern from CSV: columns ``x,y`` when both exist, otherwise
    the second column (or single column) as y values at uniform x."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataFormatError(f"{path}: empty file, header row required")
        cols = [c.strip() for c in reader.fieldnames]
        rows = list(reader)
    if len(rows) < 2:
        raise DataFormatError(f"{path}: too short, need at least 2 data rows")
    name = name or path.stem

    def column(colname: str) -> list[float]:
        out = []
        for i, row in enumerate(rows, start=2):
            cell = (row.get(colname) or "").strip()
            try:
                out.append(float(cell))
            except ValueError:
                raise DataFormatError(
                    f"{path}: non-numeric cell {cell!r} at row {i}, "
                    f"column {colname!r}"
                ) from None
        return out

    lower = [c.lower() for c in cols]
    if "x" in lower and "y" in lower:
        xs = column(reader.fieldnames[lower.index("x")])
        ys = column(reader.fieldnames[lower.index("y")])
        return Pattern(np.column_stack([xs, ys]), name=name)
    value_col = reader.fieldnames[-1]
    ys = column(value_col)
    xs = np.linspace(0.0, 1.0, len(ys))
    return Pattern(np.column_stack([xs, ys]), name=name)


def normalize_minmax(values) -> np.ndarray:
    """Affine rescale to [0, 1]; a constant input maps to all 0.5."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) < 2:
        raise ValidationError("need at least 2 values to normalize")
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.full(len(values), 0.5)
    return (values - lo) / (hi - lo)


def to_pointset(values) -> PointSet:
    """Place normalized values on the unit square: point i at x = i/(L-1)."""
    if isinstance(values, Pattern):
        return PointSet(values.points, origin_count=len(values))
    values = np.asarray(values, dtype=float)
    xs = np.linspace(0.0, 1.0, len(values))
    return PointSet(np.column_stack([xs, values]), origin_count=len(values))


def windows(series: TimeSeries, length: int, stride: int = 1):
    """Yield (start index, independently min-max normalized window) pairs."""
    if length < 2:
        raise ValidationError("window length must be at least 2")
    if stride < 1:
        raise ValidationError("stride must be positive")
    if length > len(series):
        raise ValidationError(
            f"window length {length} exceeds series length {len(series)}"
        )
    for start in range(0, len(series) - length + 1, stride):
        yield start, normalize_minmax(series.values[start : start + length])


def smooth_moving_average(series: TimeSeries, window: int) -> TimeSeries:
    """Centered moving average with truncated edges; length is preserved."""
    if window < 1 or window > len(series):
        raise ValidationError(f"smoothing window must be in [1, {len(series)}]")
    v = series.values
    half_lo, half_hi = (window - 1) // 2, window // 2
    out = np.empty(len(v))
    for i in range(len(v)):
        lo = max(0, i - half_lo)
        hi = min(len(v), i + half_hi + 1)
        out[i] = v[lo:hi].mean()
    return TimeSeries(out, series.labels)
