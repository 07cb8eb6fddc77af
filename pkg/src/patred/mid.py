"""Mutual Information Diagram coordinates.

A candidate is plotted in polar coordinates with radius equal to its
occupancy entropy H(Y) and angle arccos(NMI) against the reference; the
reference itself sits on the horizontal axis at (H(X), 0). The chord
length between a candidate and the reference point measures
dissimilarity and is the quantity ranked by the MID metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import normalize_minmax
from .errors import DegenerateComparisonError
from .metrics import information_quantities
from .raster import RasterImage, joint_occupancy


@dataclass(frozen=True)
class MidPoint:
    label: str
    radius: float
    angle: float

    @property
    def x(self) -> float:
        return self.radius * float(np.cos(self.angle))

    @property
    def y(self) -> float:
        return self.radius * float(np.sin(self.angle))

    def to_dict(self) -> dict:
        return {"label": self.label, "radius": self.radius,
                "angle": self.angle, "x": self.x, "y": self.y}


def _joint_quantities(reference: RasterImage, candidate: RasterImage):
    h = joint_occupancy(reference, candidate)
    q = information_quantities(h.as_array())
    if q.hx <= 0 or q.hy <= 0:
        raise DegenerateComparisonError(
            "MID coordinates are undefined when a marginal occupancy "
            "entropy is zero (fully empty or fully occupied grid)"
        )
    return q


def reference_point(reference: RasterImage, label: str = "P_o") -> MidPoint:
    """The self-comparison point on the horizontal axis at radius H(X)."""
    h = joint_occupancy(reference, reference)
    q = information_quantities(h.as_array())
    return MidPoint(label=label, radius=q.hx, angle=0.0)


def mid_point(reference: RasterImage, candidate: RasterImage,
              label: str = "") -> MidPoint:
    """Polar coordinates of ``candidate`` relative to ``reference``."""
    q = _joint_quantities(reference, candidate)
    return MidPoint(label=label, radius=q.hy,
                    angle=float(np.arccos(q.nmi())))


def mid_distance(reference: RasterImage, candidate: RasterImage) -> float:
    """Chord length between the candidate point and the reference point.

    Equals sqrt(Hx^2 + Hy^2 - 2 Hx Hy NMI) by the law of cosines.
    """
    q = _joint_quantities(reference, candidate)
    value = q.hx ** 2 + q.hy ** 2 - 2.0 * q.hx * q.hy * q.nmi()
    return float(np.sqrt(max(value, 0.0)))


def mid_point_guarded(reference: RasterImage, candidate: RasterImage,
                      label: str = "") -> MidPoint:
    """Like :func:`mid_point`, but degenerate grids (zero marginal
    occupancy entropy) fall back to the limiting placement: identical
    occupancy sits on the axis, anything else at a right angle."""
    try:
        return mid_point(reference, candidate, label)
    except DegenerateComparisonError:
        self_joint = joint_occupancy(candidate, candidate)
        radius = information_quantities(self_joint.as_array()).hx
        identical = bool(np.array_equal(reference.occupancy(),
                                        candidate.occupancy()))
        return MidPoint(label=label, radius=radius,
                        angle=0.0 if identical else float(np.pi / 2.0))


def mid_normalize(distances) -> list[float]:
    """Min-max normalize a candidate set of MID distances to [0, 1].

    A degenerate range (all equal, or a single value) maps to 0.5.
    """
    distances = np.asarray(distances, dtype=float)
    if len(distances) == 0:
        return []
    if len(distances) == 1:
        return [0.5]
    return [float(v) for v in normalize_minmax(distances)]
