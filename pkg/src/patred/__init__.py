"""Pattern search in time-series line charts via redundancy-augmented
chart similarity.

The pipeline: normalize a series and a sketched exemplar into unit-square
point sets, add redundant points (equidistant interpolation, stacked
area-style line copies, or a noise cloud), rasterize both onto a binned
grid, and rank candidate windows under one of nine distance metrics.
A perturbation-based harness evaluates every metric/redundancy pairing
against an external ranking ground truth.
"""

from .core import (
    Pattern,
    PointSet,
    TimeSeries,
    load_csv,
    load_pattern_csv,
    normalize_minmax,
    parse_csv_text,
    smooth_moving_average,
    to_pointset,
    windows,
)
from .errors import (
    CapabilityError,
    DataFormatError,
    DegenerateComparisonError,
    PatredError,
    ValidationError,
)
from .metrics import DistanceValue, MetricId, Mode, check_capability, distance
from .mid import MidPoint, mid_distance, mid_normalize, mid_point, reference_point
from .raster import Histogram2x2, RasterImage, bins_per_segment, rasterize
from .redundancy import (
    RedundancyConfig,
    RedundancyKind,
    SWEEP_ETAS,
    SWEEP_N_VALUES,
)
from .redundancy import apply as apply_redundancy
from .search import MatchResult, SearchRequest, search, wedge_falling

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "DataFormatError",
    "DegenerateComparisonError",
    "DistanceValue",
    "Histogram2x2",
    "MatchResult",
    "MetricId",
    "MidPoint",
    "Mode",
    "Pattern",
    "PatredError",
    "PointSet",
    "RasterImage",
    "RedundancyConfig",
    "RedundancyKind",
    "SearchRequest",
    "SWEEP_ETAS",
    "SWEEP_N_VALUES",
    "TimeSeries",
    "ValidationError",
    "apply_redundancy",
    "bins_per_segment",
    "check_capability",
    "distance",
    "load_csv",
    "load_pattern_csv",
    "mid_distance",
    "mid_normalize",
    "mid_point",
    "normalize_minmax",
    "parse_csv_text",
    "rasterize",
    "reference_point",
    "search",
    "smooth_moving_average",
    "to_pointset",
    "wedge_falling",
    "windows",
]
