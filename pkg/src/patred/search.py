"""Sliding-window localization of a sketched pattern in a longer series.

Every window of the series is min-max normalized, converted to a point
set, augmented with the same redundancy as the pattern, and scored with
the requested metric. Overlapping hits are suppressed so the reported
matches are distinct episodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Pattern, TimeSeries, to_pointset, windows
from .errors import ValidationError
from .metrics import MetricId, Mode, check_capability, distance
from .raster import DEFAULT_BINS
from .redundancy import RedundancyConfig

# A falling wedge: declining peaks converging toward declining troughs.
WEDGE_FALLING_Y = (1.0, 0.25, 0.78, 0.2, 0.6, 0.16, 0.45)


def wedge_falling(points: int = 7) -> Pattern:
    """The classic falling-wedge exemplar, optionally resampled."""
    xs = np.linspace(0.0, 1.0, len(WEDGE_FALLING_Y))
    pattern = Pattern(np.column_stack([xs, WEDGE_FALLING_Y]),
                      name="wedge-falling")
    return pattern if points == len(WEDGE_FALLING_Y) else pattern.resample(points)


@dataclass(frozen=True)
class SearchRequest:
    pattern: Pattern
    series: TimeSeries
    metric: MetricId = MetricId.NMI
    redundancy: RedundancyConfig = field(default_factory=RedundancyConfig)
    b: int = DEFAULT_BINS
    stride: int = 1
    top_k: int = 9
    # Minimum index gap between reported matches; None means one window
    # length, i.e. non-overlapping matches.
    exclusion: int | None = None
    # Window length to resample the pattern to; None keeps the pattern's
    # own point count.
    window_length: int | None = None
    mode: Mode | None = None

    def __post_init__(self):
        if self.top_k < 1:
            raise ValidationError("top_k must be at least 1")
        if self.stride < 1:
            raise ValidationError("stride must be positive")
        w = self.resolved_window()
        if w > len(self.series):
            raise ValidationError(
                f"pattern window of {w} points exceeds series length "
                f"{len(self.series)}"
            )

    def resolved_window(self) -> int:
        return self.window_length or len(self.pattern)

    def resolved_exclusion(self) -> int:
        return self.exclusion if self.exclusion is not None else self.resolved_window()

    def to_dict(self) -> dict:
        return {
            "pattern": {"name": self.pattern.name,
                        "points": self.pattern.points.tolist()},
            "series": {"values": self.series.values.tolist(),
                       "labels": list(self.series.labels) if self.series.labels else None},
            "metric": self.metric.value,
            "redundancy": self.redundancy.to_dict(),
            "b": self.b,
            "stride": self.stride,
            "top_k": self.top_k,
            "exclusion": self.exclusion,
            "window_length": self.window_length,
            "mode": self.mode.value if self.mode else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchRequest":
        return cls(
            pattern=Pattern(np.asarray(data["pattern"]["points"]),
                            name=data["pattern"].get("name", "")),
            series=TimeSeries(np.asarray(data["series"]["values"]),
                              tuple(data["series"]["labels"])
                              if data["series"].get("labels") else None),
            metric=MetricId.parse(data["metric"]),
            redundancy=RedundancyConfig.from_dict(data["redundancy"]),
            b=data.get("b", DEFAULT_BINS),
            stride=data.get("stride", 1),
            top_k=data.get("top_k", 9),
            exclusion=data.get("exclusion"),
            window_length=data.get("window_length"),
            mode=Mode(data["mode"]) if data.get("mode") else None,
        )


@dataclass(frozen=True)
class MatchResult:
    start_index: int
    distance: float
    rank: int
    window: np.ndarray

    def to_dict(self) -> dict:
        return {"start_index": self.start_index, "distance": self.distance,
                "rank": self.rank, "window": self.window.tolist()}


def rank_windows(distances) -> list[int]:
    """Rank 1..k ascending by distance, ties broken by lower position."""
    order = sorted(range(len(distances)), key=lambda i: (distances[i], i))
    ranks = [0] * len(distances)
    for rank, i in enumerate(order, start=1):
        ranks[i] = rank
    return ranks


def search(req: SearchRequest) -> list[MatchResult]:
    """Score every window against the pattern and return the top matches."""
    check_capability(req.metric, req.redundancy, req.mode)
    window_len = req.resolved_window()
    pattern = req.pattern
    if len(pattern) != window_len:
        pattern = pattern.resample(window_len)
    pattern_ps = to_pointset(pattern)

    scored: list[tuple[int, float, np.ndarray]] = []
    for start, values in windows(req.series, window_len, req.stride):
        d = distance(pattern_ps, to_pointset(values), req.metric,
                     req.redundancy, req.b, req.mode)
        scored.append((start, d.value, values))
    # Best-first with deterministic ties, then suppress overlapping starts.
    scored.sort(key=lambda item: (item[1], item[0]))
    exclusion = req.resolved_exclusion()
    accepted: list[tuple[int, float, np.ndarray]] = []
    for start, value, values in scored:
        if len(accepted) == req.top_k:
            break
        if all(abs(start - a[0]) >= exclusion for a in accepted):
            accepted.append((start, value, values))
    return [
        MatchResult(start_index=start, distance=value, rank=rank, window=values)
        for rank, (start, value, values) in enumerate(accepted, start=1)
    ]
