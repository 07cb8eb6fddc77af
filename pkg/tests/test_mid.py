"""Polar entropy/NMI coordinates for comparison plots."""

import numpy as np
import pytest

from patred.core import to_pointset
from patred.metrics import MetricId, distance, information_quantities
from patred.mid import mid_distance, mid_normalize, mid_point, mid_point_guarded, reference_point
from patred.raster import joint_occupancy, rasterize


def images(seed, n=12, b=16):
    gen = np.random.default_rng(seed)
    a = rasterize(to_pointset(gen.random(n)), b)
    b_img = rasterize(to_pointset(gen.random(n)), b)
    return a, b_img


def test_reference_point_sits_on_the_x_axis():
    ref_img, _ = images(0)
    p = reference_point(ref_img)
    q = information_quantities(joint_occupancy(ref_img, ref_img).as_array())
    assert p.angle == 0.0
    assert p.radius == pytest.approx(q.hx)
    assert p.label == "P_o"
    assert p.y == 0.0 and p.x == pytest.approx(p.radius)


def test_mid_point_polar_coordinates():
    ref, cand = images(3)
    p = mid_point(ref, cand, label="c")
    q = information_quantities(joint_occupancy(ref, cand).as_array())
    assert p.radius == pytest.approx(q.hy)
    assert p.angle == pytest.approx(np.arccos(q.nmi()))
    assert 0.0 <= p.angle <= np.pi / 2 + 1e-12


def test_chord_to_reference_equals_mid_metric(rng):
    # law-of-cosines distance between the plotted points must equal the
    # MID metric computed straight from the point sets
    for seed in range(6):
        gen = np.random.default_rng(seed)
        xs = to_pointset(gen.random(10))
        ys = to_pointset(gen.random(10))
        ref_img = rasterize(xs, 16)
        cand_img = rasterize(ys, 16)
        ref = reference_point(ref_img)
        cand = mid_point(ref_img, cand_img)
        chord = np.hypot(ref.x - cand.x, ref.y - cand.y)
        metric = distance(xs, ys, MetricId.MID).value
        assert chord == pytest.approx(metric, abs=1e-10)


def test_mid_distance_matches_chord():
    ref, cand = images(5)
    d = mid_distance(ref, cand)
    a = reference_point(ref)
    b = mid_point(ref, cand)
    assert d == pytest.approx(np.hypot(a.x - b.x, a.y - b.y), abs=1e-12)


def test_guarded_identical_degenerate_pair():
    # one point in one cell: marginal entropy 0, plain mid_point would fail
    img = rasterize(to_pointset([0.5, 0.5]), 4)
    p = mid_point_guarded(img, img, label="same")
    assert p.angle == 0.0


def test_guarded_full_occupancy_degenerate_pair():
    # A candidate covering every cell has zero occupancy entropy; the
    # guarded point falls back to a right angle when the grids differ.
    from patred.core import PointSet

    a = rasterize(to_pointset([0.0, 1.0]), 2)
    full = PointSet(np.array([[0.2, 0.2], [0.2, 0.8], [0.8, 0.2], [0.8, 0.8]]))
    b = rasterize(full, 2)
    p = mid_point_guarded(a, b)
    assert p.angle == pytest.approx(np.pi / 2)


def test_mid_point_to_dict_json_types():
    import json

    ref, cand = images(7)
    payload = mid_point(ref, cand, label="x").to_dict()
    json.dumps(payload)  # every field must already be a plain python type
    assert {"label", "radius", "angle", "x", "y"} <= set(payload)


def test_mid_normalize_unit_range():
    out = mid_normalize([3.0, 1.0, 2.0])
    assert out == [1.0, 0.0, 0.5]
