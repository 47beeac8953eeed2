"""Self-contained SVG line charts with no plotting dependency.

Output is deterministic (fixed coordinate formatting, fixed palette) and
diffable; every plotted series becomes exactly one <polyline> element.
Gaps (None values) split nothing -- they are simply dropped from the line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = ["#1f6feb", "#d29922", "#2da44e", "#cf222e", "#8250df", "#57606a"]
MARKER_COLOR = "#cf222e"
GRID = "#d8dee4"
AXIS = "#57606a"
TEXT = "#24292f"


@dataclass
class Series:
    label: str
    xs: list
    ys: list
    color: str | None = None


@dataclass
class Panel:
    """One set of axes: its series, highlighted points, and labels."""

    series: list
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    markers: list = field(default_factory=list)  # (x, y) pairs drawn as dots


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.6g}"


def nice_ticks(lo: float, hi: float, max_ticks: int = 6) -> list:
    """Round tick positions covering [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return []
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(max_ticks - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((1, 2, 2.5, 5, 10), key=lambda m: abs(m * mag - raw)) * mag
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _panel_fragment(panel: Panel, ox: float, oy: float, width: float, height: float) -> str:
    margin = {"top": 34.0, "right": 16.0, "bottom": 44.0, "left": 58.0}
    plot_w = width - margin["left"] - margin["right"]
    plot_h = height - margin["top"] - margin["bottom"]

    points = [
        (float(x), float(y))
        for s in panel.series
        for x, y in zip(s.xs, s.ys)
        if y is not None
    ] + [(float(x), float(y)) for x, y in panel.markers]
    if not points:
        xt, yt = [0.0, 1.0], [0.0, 1.0]
    else:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        xt = nice_ticks(min(xs), max(xs))
        yt = nice_ticks(min(ys), max(ys))
    x_lo, x_hi = xt[0], xt[-1] if xt[-1] > xt[0] else xt[0] + 1.0
    y_lo, y_hi = yt[0], yt[-1] if yt[-1] > yt[0] else yt[0] + 1.0

    def px(x: float) -> float:
        return ox + margin["left"] + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return oy + margin["top"] + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    parts = []
    if panel.title:
        parts.append(
            f'<text x="{_fmt(ox + width / 2)}" y="{_fmt(oy + 20)}" text-anchor="middle" '
            f'font-size="13" font-weight="bold" fill="{TEXT}">{escape(panel.title)}</text>'
        )
    for t in yt:
        y = py(t)
        parts.append(
            f'<line x1="{_fmt(ox + margin["left"])}" y1="{_fmt(y)}" '
            f'x2="{_fmt(ox + width - margin["right"])}" y2="{_fmt(y)}" stroke="{GRID}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(ox + margin["left"] - 6)}" y="{_fmt(y + 3.5)}" text-anchor="end" '
            f'font-size="10" fill="{AXIS}">{escape(_tick_label(t))}</text>'
        )
    for t in xt:
        x = px(t)
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(oy + height - margin["bottom"] + 16)}" '
            f'text-anchor="middle" font-size="10" fill="{AXIS}">{escape(_tick_label(t))}</text>'
        )
    # axes
    parts.append(
        f'<line x1="{_fmt(ox + margin["left"])}" y1="{_fmt(oy + margin["top"])}" '
        f'x2="{_fmt(ox + margin["left"])}" y2="{_fmt(oy + height - margin["bottom"])}" '
        f'stroke="{AXIS}" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_fmt(ox + margin["left"])}" y1="{_fmt(oy + height - margin["bottom"])}" '
        f'x2="{_fmt(ox + width - margin["right"])}" y2="{_fmt(oy + height - margin["bottom"])}" '
        f'stroke="{AXIS}" stroke-width="1"/>'
    )
    if panel.x_label:
        parts.append(
            f'<text x="{_fmt(ox + margin["left"] + plot_w / 2)}" y="{_fmt(oy + height - 10)}" '
            f'text-anchor="middle" font-size="11" fill="{AXIS}">{escape(panel.x_label)}</text>'
        )
    if panel.y_label:
        cx, cy = ox + 14, oy + margin["top"] + plot_h / 2
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" font-size="11" '
            f'fill="{AXIS}" transform="rotate(-90 {_fmt(cx)} {_fmt(cy)})">{escape(panel.y_label)}</text>'
        )

    for idx, s in enumerate(panel.series):
        color = s.color or PALETTE[idx % len(PALETTE)]
        coords = " ".join(
            f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}"
            for x, y in zip(s.xs, s.ys)
            if y is not None
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>'
        )
    for x, y in panel.markers:
        parts.append(
            f'<circle cx="{_fmt(px(float(x)))}" cy="{_fmt(py(float(y)))}" r="3.5" '
            f'fill="{MARKER_COLOR}"/>'
        )

    labeled = [s for s in panel.series if s.label]
    if len(labeled) > 1:
        lx = ox + margin["left"] + 10
        for idx, s in enumerate(panel.series):
            if not s.label:
                continue
            color = s.color or PALETTE[idx % len(PALETTE)]
            ly = oy + margin["top"] + 8 + 14 * idx
            parts.append(
                f'<rect x="{_fmt(lx)}" y="{_fmt(ly - 8)}" width="10" height="10" fill="{color}"/>'
            )
            parts.append(
                f'<text x="{_fmt(lx + 14)}" y="{_fmt(ly + 1)}" font-size="10" '
                f'fill="{TEXT}">{escape(s.label)}</text>'
            )
    return "\n".join(parts)


def render_chart(panel: Panel, width: int = 640, height: int = 420) -> str:
    """Single-axes chart as a standalone SVG document."""
    return render_grid([panel], columns=1, panel_width=width, panel_height=height)


def render_grid(panels: list, columns: int = 2, panel_width: int = 440, panel_height: int = 320) -> str:
    """Lay panels out row-major in a grid inside one SVG document."""
    if not panels:
        raise ValueError("need at least one panel")
    columns = min(columns, len(panels))
    rows = (len(panels) + columns - 1) // columns
    width = columns * panel_width
    height = rows * panel_height
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for i, panel in enumerate(panels):
        ox = (i % columns) * panel_width
        oy = (i // columns) * panel_height
        body.append(_panel_fragment(panel, float(ox), float(oy), float(panel_width), float(panel_height)))
    body.append("</svg>")
    return "\n".join(body) + "\n"
