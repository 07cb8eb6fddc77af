"""Redundancy generators for line-chart point sets.

Two principles guide every generator here: the original points must be
recoverable exactly from the augmented set (they stay untouched at the
front of the array), and the added points should be as uniform as
possible (equidistant placement along the connecting segments).

Three configurations are offered, plus a Gaussian variant of the cloud:

* equidistant - n aligned points inserted on each segment between
  adjacent original points;
* area line  - the equidistant set replicated with small vertical
  shifts, thickening the line into a band;
* cloud      - the equidistant set with one-sided uniform y jitter on
  the added points, blurring the line into a point cloud.

Randomness comes from numpy's PCG64 generator, so identical seeds give
identical point sets on every platform.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import PointSet
from .errors import ValidationError

# Point-count sweep used throughout the evaluation harness.
SWEEP_N_VALUES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 50, 75, 100)
# Uniform noise amplitudes for cloud redundancy.
SWEEP_ETAS = (0.025, 0.1, 0.2)

DEFAULT_COPIES = 10
DEFAULT_SHIFT = 0.01


class RedundancyKind(str, enum.Enum):
    NONE = "none"
    EQUIDISTANT = "equidistant"
    AREALINE = "arealine"
    CLOUD = "cloud"
    GAUSSCLOUD = "gausscloud"

    @classmethod
    def parse(cls, text: str) -> "RedundancyKind":
        key = text.strip().lower().replace("-", "").replace("_", "").replace(" ", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValidationError(
            f"unknown redundancy kind {text!r} "
            f"(expected one of: {', '.join(k.value for k in cls)})"
        )


@dataclass(frozen=True)
class RedundancyConfig:
    """Which augmentation to apply and its parameters.

    ``copies``/``shift`` apply to area-line only, ``eta`` to the cloud
    kinds only; ``seed`` feeds the cloud noise generator.
    """

    kind: RedundancyKind = RedundancyKind.NONE
    n_points: int = 0
    copies: int = DEFAULT_COPIES
    shift: float = DEFAULT_SHIFT
    eta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, RedundancyKind):
            object.__setattr__(self, "kind", RedundancyKind.parse(str(self.kind)))
        if self.n_points < 0:
            raise ValidationError("n_points must be nonnegative")
        if self.copies < 1:
            raise ValidationError("copies must be positive")
        if self.shift < 0:
            raise ValidationError("shift must be nonnegative")
        if self.eta < 0:
            raise ValidationError("eta must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n_points": self.n_points,
            "copies": self.copies,
            "shift": self.shift,
            "eta": self.eta,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RedundancyConfig":
        known = {f: data[f] for f in
                 ("kind", "n_points", "copies", "shift", "eta", "seed")
                 if f in data}
        unknown = set(data) - set(known)
        if unknown:
            raise ValidationError(
                f"unknown redundancy fields: {', '.join(sorted(unknown))}"
            )
        return cls(**known)

    def label(self) -> str:
        """Compact identifier used in sweep tables, e.g. ``arealine_10``."""
        if self.kind in (RedundancyKind.CLOUD, RedundancyKind.GAUSSCLOUD):
            return f"{self.kind.value}_{self.n_points}_eta{self.eta:g}"
        if self.kind is RedundancyKind.NONE:
            return "none"
        return f"{self.kind.value}_{self.n_points}"


def _require_origin_segments(ps: PointSet) -> np.ndarray:
    origin = ps.origin_points
    if len(origin) < 2:
        raise ValidationError("need at least 2 origin points to augment")
    return origin


def _insert_equidistant(origin: np.ndarray, n: int) -> np.ndarray:
    """Points at parameter t = k/(n+1), k = 1..n, on each adjacent segment."""
    if n == 0:
        return np.empty((0, 2))
    p0, p1 = origin[:-1], origin[1:]
    t = (np.arange(1, n + 1) / (n + 1))[None, :, None]
    added = p0[:, None, :] + t * (p1 - p0)[:, None, :]
    return added.reshape(-1, 2)


def equidistant(ps: PointSet, n: int) -> PointSet:
    """Insert n aligned points on every segment between adjacent origin points."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    origin = _require_origin_segments(ps)
    added = _insert_equidistant(origin, n)
    return PointSet(np.vstack([origin, added]), origin_count=len(origin))


def area_line(ps: PointSet, n: int, copies: int = DEFAULT_COPIES,
              shift: float = DEFAULT_SHIFT) -> PointSet:
    """Equidistant insertion, then the whole set repeated with vertical shifts.

    Shifts go upward in steps of ``shift``; y is clamped to 1.0 at the top.
    """
    if copies < 1:
        raise ValidationError("copies must be positive")
    base = equidistant(ps, n)
    blocks = [base.points]
    for k in range(1, copies):
        shifted = base.points.copy()
        shifted[:, 1] = np.minimum(shifted[:, 1] + k * shift, 1.0)
        blocks.append(shifted)
    return PointSet(np.vstack(blocks), origin_count=base.origin_count)


def cloud(ps: PointSet, n: int, eta: float, seed: int = 0) -> PointSet:
    """Equidistant insertion with uniform noise in [0, eta] added to the y of
    every inserted point; origin points are never perturbed."""
    if eta < 0:
        raise ValidationError("eta must be nonnegative")
    base = equidistant(ps, n)
    pts = base.points.copy()
    n_added = len(pts) - base.origin_count
    if n_added and eta > 0:
        rng = np.random.Generator(np.random.PCG64(seed))
        noise = rng.uniform(0.0, eta, size=n_added)
        pts[base.origin_count:, 1] = np.clip(
            pts[base.origin_count:, 1] + noise, 0.0, 1.0
        )
    return PointSet(pts, origin_count=base.origin_count)


def gauss_cloud(ps: PointSet, n: int, sd: float, seed: int = 0) -> PointSet:
    """Cloud variant with zero-mean Gaussian y noise (sd = ``sd``) on the
    inserted points, clipped to [0, 1]."""
    if sd < 0:
        raise ValidationError("sd must be nonnegative")
    base = equidistant(ps, n)
    pts = base.points.copy()
    n_added = len(pts) - base.origin_count
    if n_added and sd > 0:
        rng = np.random.Generator(np.random.PCG64(seed))
        noise = rng.normal(0.0, sd, size=n_added)
        pts[base.origin_count:, 1] = np.clip(
            pts[base.origin_count:, 1] + noise, 0.0, 1.0
        )
    return PointSet(pts, origin_count=base.origin_count)


def apply(ps: PointSet, config: RedundancyConfig) -> PointSet:
    """Dispatch to the generator selected by ``config.kind``."""
    kind = config.kind
    if kind is RedundancyKind.NONE:
        return equidistant(ps, 0)
    if kind is RedundancyKind.EQUIDISTANT:
        return equidistant(ps, config.n_points)
    if kind is RedundancyKind.AREALINE:
        return area_line(ps, config.n_points, config.copies, config.shift)
    if kind is RedundancyKind.CLOUD:
        return cloud(ps, config.n_points, config.eta, config.seed)
    if kind is RedundancyKind.GAUSSCLOUD:
        return gauss_cloud(ps, config.n_points, config.eta, config.seed)
    raise ValidationError(f"unhandled redundancy kind {kind}")
