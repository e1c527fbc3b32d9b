"""Minimal self-contained SVG line plots on logarithmic axes.

Layout: a 640x420 canvas, a plot frame inset by fixed margins, decade
ticks on both axes, one ``<polyline>`` per series and a legend in the upper
right.  Series colours cycle through a fixed palette so reruns are
byte-identical.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _span(values) -> tuple[float, float]:
    logs = [math.log10(v) for v in values if v > 0 and math.isfinite(v)]
    if not logs:
        return 0.0, 1.0
    lo, hi = math.floor(min(logs)), math.ceil(max(logs))
    return (lo, hi) if hi > lo else (lo, lo + 1)


def loglog_plot(series: dict[str, tuple[list[float], list[float]]], xlabel: str, ylabel: str, title: str = "", note: str = "") -> str:
    """Return an SVG document plotting each ``label -> (xs, ys)`` on log-log axes.

    Nonpositive or non-finite points are skipped.
    """
    xs_all = [x for xs, _ in series.values() for x in xs]
    ys_all = [y for _, ys in series.values() for y in ys]
    x0, x1 = _span(xs_all)
    y0, y1 = _span(ys_all)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (math.log10(x) - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (y1 - math.log10(y)) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for e in range(int(x0), int(x1) + 1):
        x = px(10.0**e)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">1e{e}</text>')
    for e in range(int(y0), int(y1) + 1):
        y = py(10.0**e)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{MARGIN_T + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + ph / 2:.2f})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, (label, (xs, ys)) in enumerate(series.items()):
        colour = PALETTE[i % len(PALETTE)]
        pts = [f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys) if x > 0 and y > 0 and math.isfinite(y)]
        if pts:
            out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{" ".join(pts)}"/>')
        ly = MARGIN_T + 16 + 16 * i
        lx = MARGIN_L + pw - 150
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{colour}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26}" y="{ly}">{escape(label)}</text>')
    if note:
        out.append(f'<text x="{MARGIN_L + 8}" y="{MARGIN_T + ph - 8}">{escape(note)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
