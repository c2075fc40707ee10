"""Minimal SVG 1.1 writers for excitation profiles and 2-D probability maps.

Output is a pure function of the input: fixed number formatting, no
timestamps, no randomness.
"""

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 150, 36, 52
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
# viridis anchors; luminance rises monotonically along the list
COLORMAP = ((0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)), (0.75, (94, 201, 98)), (1.0, (253, 231, 37)))
COLOR_LEVELS = 64


@dataclass(frozen=True)
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    reference: bool = False


def _n(v):
    return f"{v:.2f}"


def _header(width, height, title):
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{_n(width / 2)}" y="22" font-family="sans-serif" font-size="14" text-anchor="middle">{escape(title)}</text>')
    return out


def _ticks(lo, hi, n=5):
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _axes(x0, x1, y0, y1, xlabel, ylabel, px, py):
    out = [f'<rect x="{_n(px(x0))}" y="{_n(py(y1))}" width="{_n(px(x1) - px(x0))}" height="{_n(py(y0) - py(y1))}" fill="none" stroke="#000000" stroke-width="1"/>']
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{_n(X)}" y1="{_n(py(y0))}" x2="{_n(X)}" y2="{_n(py(y0) + 5)}" stroke="#000000"/>')
        out.append(f'<text x="{_n(X)}" y="{_n(py(y0) + 18)}" font-family="sans-serif" font-size="11" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{_n(px(x0) - 5)}" y1="{_n(Y)}" x2="{_n(px(x0))}" y2="{_n(Y)}" stroke="#000000"/>')
        out.append(f'<text x="{_n(px(x0) - 8)}" y="{_n(Y + 4)}" font-family="sans-serif" font-size="11" text-anchor="end">{t:g}</text>')
    cx = (px(x0) + px(x1)) / 2
    cy = (py(y0) + py(y1)) / 2
    out.append(f'<text x="{_n(cx)}" y="{_n(py(y0) + 38)}" font-family="sans-serif" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{_n(cy)}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {_n(cy)})">{escape(ylabel)}</text>')
    return out


def line_plot(series, title="", xlabel="ε", ylabel="transition probability", xrange=None):
    """Overlay of profiles; legend entries follow the order of ``series``."""
    series = list(series)
    if not series or any(len(s.x) == 0 for s in series):
        raise ValueError("line_plot needs at least one non-empty series")
    if xrange is None:
        xrange = (min(float(np.min(s.x)) for s in series), max(float(np.max(s.x)) for s in series))
    x0, x1 = xrange
    if not x1 > x0:
        x1 = x0 + 1.0
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    px = lambda v: MARGIN_L + (v - x0) / (x1 - x0) * plot_w  # noqa: E731
    py = lambda v: MARGIN_T + (1.0 - v) * plot_h  # noqa: E731

    out = _header(WIDTH, HEIGHT, title)
    out += _axes(x0, x1, 0.0, 1.0, xlabel, ylabel, px, py)
    color_i = 0
    legend = []
    for s in series:
        if s.reference:
            color, dash = "#888888", ' stroke-dasharray="2,3"'
        else:
            color, dash = PALETTE[color_i % len(PALETTE)], ""
            color_i += 1
        pts = " ".join(f"{_n(px(float(x)))},{_n(py(float(min(max(y, 0.0), 1.0))))}" for x, y in zip(s.x, s.y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"><title>{escape(s.label)}</title></polyline>')
        legend.append((s.label, color, dash))
    lx = WIDTH - MARGIN_R + 14
    for k, (label, color, dash) in enumerate(legend):
        ly = MARGIN_T + 12 + 18 * k
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 4}" font-family="sans-serif" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def colormap(v):
    """Map v in [0, 1] to an ``#rrggbb`` colour, quantised to :data:`COLOR_LEVELS` steps."""
    v = min(max(float(v), 0.0), 1.0)
    v = round(v * (COLOR_LEVELS - 1)) / (COLOR_LEVELS - 1)
    for (a, ca), (b, cb) in zip(COLORMAP, COLORMAP[1:]):
        if v <= b:
            t = (v - a) / (b - a)
            rgb = [round(x + t * (y - x)) for x, y in zip(ca, cb)]
            return "#%02x%02x%02x" % tuple(rgb)
    return "#%02x%02x%02x" % COLORMAP[-1][1]


def heatmap(eps_axis, delta_axis, values, title="", xlabel="ε", ylabel="δ / Ω₀"):
    """Colour map of ``values[delta_index, eps_index]``; runs of equal colour along a row share one rect."""
    eps_axis = np.asarray(eps_axis, dtype=np.float64)
    delta_axis = np.asarray(delta_axis, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64).reshape(len(delta_axis), len(eps_axis))
    if values.size == 0:
        raise ValueError("heatmap needs at least one value")
    x0, x1 = float(eps_axis[0]), float(eps_axis[-1])
    y0, y1 = float(delta_axis[0]), float(delta_axis[-1])
    if x1 <= x0:
        x0, x1 = x0 - 0.5, x0 + 0.5
    if y1 <= y0:
        y0, y1 = y0 - 0.5, y0 + 0.5
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    nx, ny = len(eps_axis), len(delta_axis)
    cw, ch = plot_w / nx, plot_h / ny
    px = lambda v: MARGIN_L + (v - x0) / (x1 - x0) * plot_w  # noqa: E731
    py = lambda v: MARGIN_T + (1.0 - (v - y0) / (y1 - y0)) * plot_h  # noqa: E731

    out = _header(WIDTH, HEIGHT, title)
    out.append('<g shape-rendering="crispEdges">')
    for j in range(ny):
        row = [colormap(v) for v in values[j]]
        y = MARGIN_T + (ny - 1 - j) * ch
        i = 0
        while i < nx:
            k = i
            while k + 1 < nx and row[k + 1] == row[i]:
                k += 1
            out.append(f'<rect x="{_n(MARGIN_L + i * cw)}" y="{_n(y)}" width="{_n((k - i + 1) * cw)}" height="{_n(ch)}" fill="{row[i]}"/>')
            i = k + 1
    out.append("</g>")
    out += _axes(x0, x1, y0, y1, xlabel, ylabel, px, py)
    # colour bar
    bx = WIDTH - MARGIN_R + 24
    steps = 32
    for k in range(steps):
        v0 = k / steps
        yb = MARGIN_T + plot_h * (1.0 - (k + 1) / steps)
        out.append(f'<rect x="{bx}" y="{_n(yb)}" width="16" height="{_n(plot_h / steps)}" fill="{colormap(v0 + 0.5 / steps)}"/>')
    for t in (0.0, 0.5, 1.0):
        out.append(f'<text x="{bx + 22}" y="{_n(MARGIN_T + plot_h * (1.0 - t) + 4)}" font-family="sans-serif" font-size="11">{t:g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(records, style="line", title="", label="p"):
    """SVG for scan records: ``style="line"`` plots p(epsilon), ``"heatmap"`` maps a row-major 2-D scan."""
    records = list(records)
    if not records:
        raise ValueError("cannot plot an empty record list")
    if style == "line":
        x = np.array([r.epsilon for r in records])
        y = np.array([r.probability_ideal for r in records])
        series = [Series(label, x, y)]
        if records[0].probability_noisy is not None:
            series.append(Series(f"{label} (noisy)", x, np.array([r.probability_noisy for r in records])))
        return line_plot(series, title=title)
    if style == "heatmap":
        eps_axis = np.unique([r.epsilon for r in records])
        delta_axis = np.unique([r.delta for r in records])
        vals = np.array([r.probability_ideal for r in records])
        return heatmap(eps_axis, delta_axis, vals, title=title)
    raise ValueError(f"unknown plot style {style!r}")
