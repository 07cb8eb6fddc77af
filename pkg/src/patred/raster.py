"""Binned images of point sets and the histograms the metrics consume.

Cells are indexed row-major with row 0 at the bottom (y in [0, 1/b));
a coordinate of exactly 1.0 falls in the last bin. Flat cell index is
``row * b + col``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PointSet
from .errors import ValidationError

DEFAULT_BINS = 16

# Zero-cell smoothing for KL/JSD on cell distributions.
SMOOTHING_EPS = 1e-12


@dataclass(frozen=True)
class RasterImage:
    """b x b grid of point counts; ``bins[row, col]`` with row 0 at the bottom."""

    bins: np.ndarray
    b: int

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64)
        object.__setattr__(self, "bins", bins)
        if bins.shape != (self.b, self.b):
            raise ValidationError(f"bins must be {self.b}x{self.b}")
        if bins.min(initial=0) < 0:
            raise ValidationError("cell counts must be nonnegative")

    @property
    def total(self) -> int:
        return int(self.bins.sum())

    def occupancy(self) -> np.ndarray:
        return self.bins > 0

    def to_lists(self) -> list[list[int]]:
        return self.bins.tolist()


@dataclass(frozen=True)
class Histogram2x2:
    """Joint binary-occupancy contingency table of two equally sized grids.

    ``nXY``: first index is occupancy of the first image, second of the
    second image; the four counts sum to b*b.
    """

    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    def as_array(self) -> np.ndarray:
        return np.array([[self.n00, self.n01], [self.n10, self.n11]], dtype=float)


def rasterize(ps: PointSet, b: int = DEFAULT_BINS) -> RasterImage:
    """Count points per grid cell; every point lands in exactly one cell."""
    if b < 2:
        raise ValidationError("grid side b must be at least 2")
    pts = ps.points
    cols = np.minimum((pts[:, 0] * b).astype(np.int64), b - 1)
    rows = np.minimum((pts[:, 1] * b).astype(np.int64), b - 1)
    flat = np.bincount(rows * b + cols, minlength=b * b)
    return RasterImage(flat.reshape(b, b), b)


def bins_per_segment(origin_count: int, per_segment: int = 8) -> int:
    """Grid side scaled to the chart: ``per_segment`` bins per line segment,
    clipped to [8, 128]."""
    return int(np.clip(per_segment * (origin_count - 1), 8, 128))


def marginal_pdf(img: RasterImage) -> np.ndarray:
    """Probabilities of the populated cells, in flat cell-index order."""
    total = img.total
    if total == 0:
        raise ValidationError("cannot take the pdf of an empty image")
    counts = img.bins.reshape(-1)
    return counts[counts > 0] / total


def cell_pdf(img: RasterImage) -> np.ndarray:
    """Probability per cell over all b*b cells, in flat cell-index order."""
    total = img.total
    if total == 0:
        raise ValidationError("cannot take the pdf of an empty image")
    return img.bins.reshape(-1) / total


def smoothed_cell_pdfs(
    img_x: RasterImage, img_y: RasterImage, eps: float = SMOOTHING_EPS
) -> tuple[np.ndarray, np.ndarray]:
    """Aligned cell distributions of two same-size images with additive
    smoothing on zero cells, renormalized. KL needs matched support."""
    if img_x.b != img_y.b:
        raise ValidationError("images must have the same grid side")
    p = cell_pdf(img_x) + eps
    q = cell_pdf(img_y) + eps
    return p / p.sum(), q / q.sum()


def joint_occupancy(img_x: RasterImage, img_y: RasterImage) -> Histogram2x2:
    """Tally per-cell occupancy pairs (occupied-in-x, occupied-in-y)."""
    if img_x.b != img_y.b:
        raise ValidationError("images must have the same grid side")
    occ_x = img_x.occupancy()
    occ_y = img_y.occupancy()
    n11 = int(np.count_nonzero(occ_x & occ_y))
    n10 = int(np.count_nonzero(occ_x & ~occ_y))
    n01 = int(np.count_nonzero(~occ_x & occ_y))
    n00 = img_x.b * img_x.b - n11 - n10 - n01
    return Histogram2x2(n00, n01, n10, n11)


def occupancy_set(img: RasterImage) -> frozenset[int]:
    """Flat indices of the populated cells."""
    return frozenset(np.flatnonzero(img.bins.reshape(-1)).tolist())
