"""Static SVG figure generation.

Everything here is hand-assembled SVG text with fixed-precision
coordinates, so a figure rendered twice from the same inputs is
byte-identical. No plotting dependency is worth carrying for line
charts, scatter dots, and text labels.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .mid import MidPoint

_FG = "#1a1a2e"
_ACCENT = "#c0392b"
_MUTED = "#8a8a9a"
_GRID = "#d8d8e0"


def _n(value: float) -> str:
    """Fixed two-decimal coordinate formatting (deterministic output)."""
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def _polyline(xs, ys, stroke: str = _FG, width: float = 1.5) -> str:
    pts = " ".join(f"{_n(x)},{_n(y)}" for x, y in zip(xs, ys))
    return (f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_n(width)}" stroke-linejoin="round" '
            f'stroke-linecap="round"/>')


def _text(x: float, y: float, s: str, size: int = 11, fill: str = _FG,
          anchor: str = "start") -> str:
    return (f'<text x="{_n(x)}" y="{_n(y)}" font-size="{size}" '
            f'font-family="sans-serif" fill="{fill}" '
            f'text-anchor="{anchor}">{_escape(s)}</text>')


def _escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">')
    background = (f'<rect x="0" y="0" width="{width}" height="{height}" '
                  f'fill="#ffffff"/>')
    return "\n".join([head, background, *body, "</svg>"]) + "\n"


def _scaled(values, x0: float, y0: float, w: float, h: float):
    """Map a value sequence into a plot box (y grows upward)."""
    v = np.asarray(values, dtype=float)
    lo, hi = v.min(), v.max()
    ys = np.full(len(v), 0.5) if hi == lo else (v - lo) / (hi - lo)
    xs = np.linspace(0.0, 1.0, len(v)) if len(v) > 1 else np.array([0.5])
    return x0 + xs * w, y0 + (1.0 - ys) * h


def line_chart(values, title: str = "", width: int = 320,
               height: int = 120) -> str:
    """A single minimal line chart."""
    pad = 10.0
    top = 24.0 if title else pad
    body = []
    if title:
        body.append(_text(pad, 16, title, size=12))
    xs, ys = _scaled(values, pad, top, width - 2 * pad, height - top - pad)
    body.append(f'<rect x="{_n(pad)}" y="{_n(top)}" '
                f'width="{_n(width - 2 * pad)}" height="{_n(height - top - pad)}" '
                f'fill="none" stroke="{_GRID}"/>')
    body.append(_polyline(xs, ys))
    return _svg(width, height, body)


def sparkline_grid(rows: list[tuple[str, list[float]]], title: str = "",
                   x_labels: list[str] | None = None,
                   cell_width: int = 260, cell_height: int = 42) -> str:
    """A labelled column of sparklines, one per row; all rows share the
    y-range so trajectories are comparable."""
    if not rows:
        raise ValidationError("sparkline grid needs at least one row")
    label_width = 180
    pad = 10
    top = 30 if title else pad
    height = top + len(rows) * cell_height + pad + (14 if x_labels else 0)
    width = label_width + cell_width + 2 * pad

    all_values = np.concatenate([np.asarray(v, float) for _, v in rows])
    lo, hi = float(all_values.min()), float(all_values.max())
    span = hi - lo if hi != lo else 1.0

    body = []
    if title:
        body.append(_text(pad, 18, title, size=13))
    for i, (label, values) in enumerate(rows):
        y0 = top + i * cell_height
        box_h = cell_height - 10
        body.append(_text(pad, y0 + box_h / 2 + 4, label, size=10))
        v = np.asarray(values, dtype=float)
        ys = y0 + (1.0 - (v - lo) / span) * box_h
        xs = (label_width
              + np.linspace(0.0, 1.0, len(v)) * (cell_width - 2 * pad))
        body.append(f'<line x1="{_n(xs[0])}" y1="{_n(y0 + box_h)}" '
                    f'x2="{_n(xs[-1])}" y2="{_n(y0 + box_h)}" '
                    f'stroke="{_GRID}"/>')
        body.append(_polyline(xs, ys, width=1.2))
        body.append(f'<circle cx="{_n(xs[-1])}" cy="{_n(ys[-1])}" r="2" '
                    f'fill="{_ACCENT}"/>')
    if x_labels:
        y = top + len(rows) * cell_height + 10
        xs = (label_width
              + np.linspace(0.0, 1.0, len(x_labels)) * (cell_width - 2 * pad))
        for x, lab in zip(xs, x_labels):
            body.append(_text(x, y, lab, size=8, fill=_MUTED, anchor="middle"))
    return _svg(width, height, body)


def mid_scatter(points: list[MidPoint], title: str = "",
                size: int = 420) -> str:
    """Polar scatter of entropy/NMI coordinates: radius is entropy, the
    angle opens with falling NMI. The first point is treated as the
    reference and drawn accented."""
    if not points:
        raise ValidationError("scatter needs at least one point")
    pad = 36.0
    plot = size - 2 * pad
    r_max = max(max(p.radius for p in points), 1e-9) * 1.1

    def place(p: MidPoint) -> tuple[float, float]:
        x = pad + (p.x / r_max) * plot
        y = size - pad - (p.y / r_max) * plot
        return x, y

    body = []
    if title:
        body.append(_text(pad, 20, title, size=13))
    # Quarter-circle entropy grid.
    for frac in (0.25, 0.5, 0.75, 1.0):
        r = frac * r_max / 1.1
        rr = (r / r_max) * plot
        x0, y0 = pad, size - pad
        body.append(
            f'<path d="M {_n(x0 + rr)} {_n(y0)} A {_n(rr)} {_n(rr)} 0 0 0 '
            f'{_n(x0)} {_n(y0 - rr)}" fill="none" stroke="{_GRID}"/>')
        body.append(_text(x0 + rr, y0 + 12, f"{r:.2f}", size=8, fill=_MUTED,
                          anchor="middle"))
    body.append(f'<line x1="{_n(pad)}" y1="{_n(size - pad)}" '
                f'x2="{_n(size - pad)}" y2="{_n(size - pad)}" stroke="{_FG}"/>')
    body.append(f'<line x1="{_n(pad)}" y1="{_n(size - pad)}" '
                f'x2="{_n(pad)}" y2="{_n(pad)}" stroke="{_FG}"/>')
    body.append(_text(size - pad, size - 8, "entropy (bits)", size=10,
                      fill=_MUTED, anchor="end"))

    for i, p in enumerate(points):
        x, y = place(p)
        fill = _ACCENT if i == 0 else _FG
        body.append(f'<circle cx="{_n(x)}" cy="{_n(y)}" r="4" fill="{fill}"/>')
        body.append(_text(x + 6, y - 6, p.label, size=9))
    return _svg(size, size, body)


def match_strip(pattern_values, windows: list, labels: list[str],
                title: str = "", cell_width: int = 150,
                cell_height: int = 90) -> str:
    """The sketched pattern followed by each match window, side by side."""
    if len(windows) != len(labels):
        raise ValidationError("one label per window required")
    pad = 8
    top = 26 if title else pad
    panels = [("pattern", np.asarray(pattern_values, float))] + [
        (lab, np.asarray(w, float)) for lab, w in zip(labels, windows)
    ]
    width = pad + len(panels) * (cell_width + pad)
    height = top + cell_height + 24

    body = []
    if title:
        body.append(_text(pad, 17, title, size=12))
    for i, (label, values) in enumerate(panels):
        x0 = pad + i * (cell_width + pad)
        stroke = _ACCENT if i == 0 else _FG
        body.append(f'<rect x="{_n(x0)}" y="{_n(top)}" '
                    f'width="{_n(cell_width)}" height="{_n(cell_height)}" '
                    f'fill="none" stroke="{_GRID}"/>')
        xs, ys = _scaled(values, x0 + 6, top + 6,
                         cell_width - 12, cell_height - 12)
        body.append(_polyline(xs, ys, stroke=stroke))
        body.append(_text(x0 + cell_width / 2, top + cell_height + 14, label,
                          size=9, fill=_MUTED, anchor="middle"))
    return _svg(width, height, body)


def raster_heat(bins: np.ndarray, title: str = "", cell: int = 14) -> str:
    """Occupancy heat map of a binned image (row 0 at the bottom)."""
    b = bins.shape[0]
    pad = 10
    top = 26 if title else pad
    width = 2 * pad + b * cell
    height = top + b * cell + pad
    peak = max(int(bins.max()), 1)
    body = []
    if title:
        body.append(_text(pad, 17, title, size=12))
    for row in range(b):
        for col in range(b):
            count = int(bins[row, col])
            if count == 0:
                continue
            shade = 235 - int(195 * min(count / peak, 1.0))
            x = pad + col * cell
            y = top + (b - 1 - row) * cell
            body.append(f'<rect x="{x}" y="{y}" width="{cell}" '
                        f'height="{cell}" fill="rgb({shade},{shade},255)"/>')
    body.append(f'<rect x="{pad}" y="{top}" width="{b * cell}" '
                f'height="{b * cell}" fill="none" stroke="{_GRID}"/>')
    return _svg(width, height, body)


def save_svg(svg_text: str, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg_text)
    return path


def angle_degrees(p: MidPoint) -> float:
    """Convenience for labelling: the point's angle in degrees."""
    return math.degrees(p.angle)
