"""The nine distance metrics, in sequence and raster representations.

Sequence mode compares two paired 1D value vectors (values binned along
the y axis only, where a metric needs a histogram); raster mode compares
two binned images of the augmented point sets (both axes binned). The
point-pairing metrics Manhattan, Euclidean and Pearson exist only in
sequence mode; the grouping metrics (Cosine, Jaccard, Dice, NMI, JSD,
MID) are canonical in raster mode.

All similarities are converted so that lower always means more similar:
1 - s for Cosine/Jaccard/Dice/NMI, (1 - r)/2 for Pearson, and the raw
value for Manhattan/Euclidean/JSD. Information quantities use log base 2
and are reported in bits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import redundancy
from .core import PointSet
from .errors import CapabilityError, DegenerateComparisonError, ValidationError
from .raster import (
    DEFAULT_BINS,
    Histogram2x2,
    RasterImage,
    joint_occupancy,
    occupancy_set,
    rasterize,
    smoothed_cell_pdfs,
)
from .redundancy import RedundancyConfig, RedundancyKind


class MetricId(str, enum.Enum):
    MANHATTAN = "manhattan"
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"
    JACCARD = "jaccard"
    DICE = "dice"
    PEARSON = "pearson"
    NMI = "nmi"
    JSD = "jsd"
    MID = "mid"

    @classmethod
    def parse(cls, text: str) -> "MetricId":
        key = text.strip().lower()
        for metric in cls:
            if metric.value == key:
                return metric
        raise ValidationError(
            f"unknown metric {text!r} "
            f"(expected one of: {', '.join(m.value for m in cls)})"
        )


class Mode(str, enum.Enum):
    SEQUENCE = "sequence"
    RASTER = "raster"


# Metrics that pair individual data points and so require equal-length,
# order-aligned vectors.
POINT_METRICS = frozenset(
    {MetricId.MANHATTAN, MetricId.EUCLIDEAN, MetricId.PEARSON}
)

# Redundancy kinds that keep both inputs paired point-for-point.
PAIR_PRESERVING_KINDS = frozenset(
    {RedundancyKind.NONE, RedundancyKind.EQUIDISTANT}
)


@dataclass(frozen=True)
class DistanceValue:
    value: float
    metric: MetricId
    mode: Mode

    def to_dict(self) -> dict:
        return {"value": self.value, "metric": self.metric.value,
                "mode": self.mode.value}


def canonical_mode(metric: MetricId) -> Mode:
    return Mode.SEQUENCE if metric in POINT_METRICS else Mode.RASTER


# ---------------------------------------------------------------------------
# Vector metrics (sequence representation)
# ---------------------------------------------------------------------------

def _paired(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 1:
        raise ValidationError(
            f"need two equal-length vectors, got lengths {x.size} and {y.size}"
        )
    return x, y


def manhattan(x, y) -> float:
    """Sum of absolute coordinate differences."""
    x, y = _paired(x, y)
    return float(np.abs(x - y).sum())


def euclidean(x, y) -> float:
    """Geometric distance between the two vectors."""
    x, y = _paired(x, y)
    return float(np.linalg.norm(x - y))


def cosine_distance(x, y) -> float:
    """1 - cos(angle); in [0, 1] for nonnegative vectors."""
    x, y = _paired(x, y)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ValidationError("cosine distance is undefined for a zero vector")
    # Cauchy-Schwarz bounds the similarity by 1; shave float overshoot.
    return float(max(0.0, 1.0 - float(x @ y) / (nx * ny)))


def pearson_distance(x, y) -> float:
    """(1 - r)/2, mapping correlation 1 to 0 and correlation -1 to 1."""
    x, y = _paired(x, y)
    sx = x - x.mean()
    sy = y - y.mean()
    vx, vy = float(sx @ sx), float(sy @ sy)
    if vx == 0 or vy == 0:
        raise ValidationError(
            "pearson distance is undefined for a constant vector"
        )
    r = min(1.0, max(-1.0, float(sx @ sy) / float(np.sqrt(vx * vy))))
    return (1.0 - r) / 2.0


# ---------------------------------------------------------------------------
# Set metrics
# ---------------------------------------------------------------------------

def jaccard_distance(a: frozenset | set, b: frozenset | set) -> float:
    """1 - |intersection| / |union|; two empty sets count as identical."""
    union = len(a | b)
    if union == 0:
        return 0.0
    return 1.0 - len(a & b) / union


def dice_distance(a: frozenset | set, b: frozenset | set) -> float:
    """1 - 2 |intersection| / (|a| + |b|); two empty sets count as identical."""
    size = len(a) + len(b)
    if size == 0:
        return 0.0
    return 1.0 - 2.0 * len(a & b) / size


# ---------------------------------------------------------------------------
# Information-theoretic quantities (bits)
# ---------------------------------------------------------------------------

def entropy(p) -> float:
    """Shannon entropy -sum(p log2 p) of a probability vector, in bits."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValidationError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
    pos = p[p > 0]
    return float(-(pos * np.log2(pos)).sum())


@dataclass(frozen=True)
class InfoQuantities:
    """Mutual information and entropies of a joint contingency table."""

    mi: float
    hx: float
    hy: float
    hxy: float

    def nmi(self) -> float:
        if self.hx <= 0 or self.hy <= 0:
            raise DegenerateComparisonError(
                "NMI is undefined when a marginal entropy is zero"
            )
        return float(min(max(self.mi / np.sqrt(self.hx * self.hy), 0.0), 1.0))

    def vi(self) -> float:
        return self.hx + self.hy - 2.0 * self.mi


def _entropy_raw(p: np.ndarray) -> float:
    pos = p[p > 0]
    return float(-(pos * np.log2(pos)).sum())


def information_quantities(joint) -> InfoQuantities:
    """I, H(X), H(Y), H(X,Y) from any 2D contingency table of counts."""
    table = np.asarray(joint, dtype=float)
    if table.ndim != 2:
        raise ValidationError("joint table must be 2-dimensional")
    total = table.sum()
    if total <= 0:
        raise ValidationError("joint table must have a positive total")
    p = table / total
    hx = _entropy_raw(p.sum(axis=1))
    hy = _entropy_raw(p.sum(axis=0))
    hxy = _entropy_raw(p.reshape(-1))
    return InfoQuantities(mi=hx + hy - hxy, hx=hx, hy=hy, hxy=hxy)


def mutual_information(h: Histogram2x2) -> tuple[float, float, float, float]:
    """(I, Hx, Hy, Hxy) of a joint occupancy table."""
    q = information_quantities(h.as_array())
    return q.mi, q.hx, q.hy, q.hxy


def nmi_distance(h: Histogram2x2) -> float:
    """1 - I/sqrt(Hx Hy); raises on zero marginal entropy."""
    return 1.0 - information_quantities(h.as_array()).nmi()


def vi(h: Histogram2x2) -> float:
    """Variation of information Hx + Hy - 2I, in bits."""
    return information_quantities(h.as_array()).vi()


def kl_divergence(p, q) -> float:
    """sum p log2(p/q); asymmetric; caller must smooth unmatched support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    mask = p > 0
    if np.any(q[mask] == 0):
        raise ValidationError(
            "KL divergence needs q > 0 wherever p > 0; apply smoothing"
        )
    return float((p[mask] * np.log2(p[mask] / q[mask])).sum())


def jsd(p, q) -> float:
    """Jensen-Shannon divergence, log base 2, in [0, 1]."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    m = 0.5 * (p + q)
    return max(0.0, 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m))


# ---------------------------------------------------------------------------
# Dispatch over point sets
# ---------------------------------------------------------------------------

def capability_message(metric: MetricId, kind: RedundancyKind) -> str:
    return (
        f"{metric.value} compares vectors point by point, so both inputs must "
        f"keep the same number of data points in the same pairing order; "
        f"{kind.value} redundancy breaks that pairing. "
        f"Use equidistant redundancy or a grouping metric instead."
    )


def check_capability(metric: MetricId, cfg: RedundancyConfig,
                     mode: Mode | None = None) -> Mode:
    """Resolve the comparison mode and reject impossible pairings."""
    if mode is None:
        mode = canonical_mode(metric)
    if metric in POINT_METRICS and mode is not Mode.SEQUENCE:
        raise CapabilityError(
            f"{metric.value} is only defined in sequence mode"
        )
    if mode is Mode.SEQUENCE and cfg.kind not in PAIR_PRESERVING_KINDS:
        raise CapabilityError(capability_message(metric, cfg.kind))
    return mode


def _sequence_vectors(
    x: PointSet, y: PointSet, cfg: RedundancyConfig
) -> tuple[np.ndarray, np.ndarray]:
    if x.origin_count != y.origin_count:
        raise ValidationError(
            "sequence mode needs equal origin lengths, got "
            f"{x.origin_count} and {y.origin_count}"
        )
    ax = redundancy.apply(x, cfg)
    ay = redundancy.apply(y, cfg)
    vx = ax.points[np.argsort(ax.points[:, 0], kind="stable"), 1]
    vy = ay.points[np.argsort(ay.points[:, 0], kind="stable"), 1]
    return vx, vy


def _value_bins(v: np.ndarray, b: int) -> np.ndarray:
    return np.minimum((v * b).astype(np.int64), b - 1)


def _sequence_joint(vx: np.ndarray, vy: np.ndarray, b: int) -> np.ndarray:
    bx = _value_bins(vx, b)
    by = _value_bins(vy, b)
    return np.bincount(bx * b + by, minlength=b * b).reshape(b, b)


def _value_histogram(v: np.ndarray, b: int) -> np.ndarray:
    return np.bincount(_value_bins(v, b), minlength=b) / len(v)


def _chord(hx: float, hy: float, nmi_value: float) -> float:
    return float(np.sqrt(max(hx * hx + hy * hy - 2.0 * hx * hy * nmi_value, 0.0)))


def _guarded_nmi(q: InfoQuantities, identical: bool) -> float:
    """NMI with the degenerate zero-entropy case resolved by convention:
    identical inputs are fully similar, anything else fully dissimilar."""
    try:
        return q.nmi()
    except DegenerateComparisonError:
        return 1.0 if identical else 0.0


def _sequence_distance(metric: MetricId, x: PointSet, y: PointSet,
                       cfg: RedundancyConfig, b: int) -> float:
    vx, vy = _sequence_vectors(x, y, cfg)
    if metric is MetricId.MANHATTAN:
        return manhattan(vx, vy)
    if metric is MetricId.EUCLIDEAN:
        return euclidean(vx, vy)
    if metric is MetricId.PEARSON:
        return pearson_distance(vx, vy)
    if metric is MetricId.COSINE:
        return cosine_distance(vx, vy)
    if metric is MetricId.JSD:
        return jsd(_value_histogram(vx, b), _value_histogram(vy, b))
    if metric is MetricId.JACCARD:
        return jaccard_distance(set(_value_bins(vx, b).tolist()),
                                set(_value_bins(vy, b).tolist()))
    if metric is MetricId.DICE:
        return dice_distance(set(_value_bins(vx, b).tolist()),
                             set(_value_bins(vy, b).tolist()))
    q = information_quantities(_sequence_joint(vx, vy, b))
    identical = bool(np.array_equal(_value_bins(vx, b), _value_bins(vy, b)))
    if metric is MetricId.NMI:
        return 1.0 - _guarded_nmi(q, identical)
    if metric is MetricId.MID:
        return _chord(q.hx, q.hy, _guarded_nmi(q, identical))
    raise ValidationError(f"unhandled metric {metric}")


def raster_distance(metric: MetricId, img_x: RasterImage,
                    img_y: RasterImage) -> float:
    """Distance between two already-rasterized images."""
    if metric is MetricId.COSINE:
        return cosine_distance(img_x.bins.reshape(-1).astype(float),
                               img_y.bins.reshape(-1).astype(float))
    if metric is MetricId.JACCARD:
        return jaccard_distance(occupancy_set(img_x), occupancy_set(img_y))
    if metric is MetricId.DICE:
        return dice_distance(occupancy_set(img_x), occupancy_set(img_y))
    if metric is MetricId.JSD:
        return jsd(*smoothed_cell_pdfs(img_x, img_y))
    h = joint_occupancy(img_x, img_y)
    q = information_quantities(h.as_array())
    identical = bool(np.array_equal(img_x.occupancy(), img_y.occupancy()))
    if metric is MetricId.NMI:
        return 1.0 - _guarded_nmi(q, identical)
    if metric is MetricId.MID:
        return _chord(q.hx, q.hy, _guarded_nmi(q, identical))
    raise CapabilityError(f"{metric.value} is only defined in sequence mode")


def distance(x: PointSet, y: PointSet, metric: MetricId,
             cfg: RedundancyConfig | None = None, b: int = DEFAULT_BINS,
             mode: Mode | None = None) -> DistanceValue:
    """Augment both inputs identically, then measure their distance.

    Raster mode rasterizes the augmented sets to b x b images first;
    sequence mode compares the paired value vectors directly.
    """
    cfg = cfg or RedundancyConfig()
    mode = check_capability(metric, cfg, mode)
    if mode is Mode.SEQUENCE:
        value = _sequence_distance(metric, x, y, cfg, b)
    else:
        img_x = rasterize(redundancy.apply(x, cfg), b)
        img_y = rasterize(redundancy.apply(y, cfg), b)
        value = raster_distance(metric, img_x, img_y)
    return DistanceValue(value=float(value), metric=metric, mode=mode)
