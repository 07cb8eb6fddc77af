"""SVG figure generation: structure and determinism, not pixels."""

import numpy as np

from patred.core import to_pointset
from patred.figures import (
    angle_degrees,
    line_chart,
    match_strip,
    mid_scatter,
    raster_heat,
    save_svg,
    sparkline_grid,
)
from patred.mid import mid_point, reference_point
from patred.raster import rasterize


def test_line_chart_is_valid_svg():
    svg = line_chart([0.1, 0.9, 0.4, 0.6], title="walk")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert "polyline" in svg and "walk" in svg


def test_line_chart_deterministic():
    values = np.random.default_rng(3).random(20)
    assert line_chart(values) == line_chart(values)


def test_sparkline_grid_rows_share_scale():
    rows = [("a", [0.0, 1.0, 0.5]), ("b", [0.2, 0.4, 0.3])]
    svg = sparkline_grid(rows, title="grid")
    assert svg.count("polyline") >= 2
    assert "a" in svg and "b" in svg


def test_mid_scatter_marks_reference():
    gen = np.random.default_rng(1)
    ref = rasterize(to_pointset(gen.random(10)), 16)
    cand = rasterize(to_pointset(gen.random(10)), 16)
    points = [reference_point(ref), mid_point(ref, cand, label="rank1")]
    svg = mid_scatter(points, title="mid")
    assert "P_o" in svg and "rank1" in svg
    assert svg.count("<circle") >= 2


def test_match_strip_one_panel_per_window():
    windows = [np.linspace(0, 1, 8), np.linspace(1, 0, 8)]
    svg = match_strip([0.0, 1.0, 0.2], windows, labels=["#30", "#55"])
    assert "#30" in svg and "#55" in svg
    assert svg.count("polyline") >= 3  # pattern + both windows


def test_raster_heat_draws_every_cell():
    bins = np.arange(16).reshape(4, 4)
    svg = raster_heat(bins)
    assert svg.count("<rect") >= 16


def test_text_is_escaped():
    svg = line_chart([0.1, 0.2], title="<&>")
    assert "<&>" not in svg
    assert "&lt;&amp;&gt;" in svg


def test_save_svg_writes_file(tmp_path):
    target = tmp_path / "figs" / "chart.svg"
    path = save_svg(line_chart([0.4, 0.6]), target)
    assert path == target
    assert target.read_text().startswith("<svg")


def test_angle_degrees():
    gen = np.random.default_rng(2)
    ref = rasterize(to_pointset(gen.random(10)), 16)
    assert angle_degrees(reference_point(ref)) == 0.0
