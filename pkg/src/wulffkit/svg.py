"""Minimal SVG line plots, emitted as path elements with no dependencies."""

from __future__ import annotations

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = 54
COLORS = ("#1f6fb2", "#c7402d", "#3c8a4b", "#8a5fb0", "#b08a3c")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return [float(t) for t in raw]


def line_plot(series, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Render (label, x, y[, dashed]) tuples into a standalone SVG string."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def py(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
           f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" '
               f'width="{WIDTH - 2 * MARGIN}" height="{HEIGHT - 2 * MARGIN}" '
               'fill="none" stroke="#444" stroke-width="1"/>')
    for t in _ticks(x0, x1):
        x = px(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{HEIGHT - MARGIN}" '
                   f'x2="{_fmt(x)}" y2="{HEIGHT - MARGIN + 5}" stroke="#444"/>')
        out.append(f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN + 18}" '
                   f'font-size="11" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        y = py(t)
        out.append(f'<line x1="{MARGIN - 5}" y1="{_fmt(y)}" '
                   f'x2="{MARGIN}" y2="{_fmt(y)}" stroke="#444"/>')
        out.append(f'<text x="{MARGIN - 8}" y="{_fmt(y + 4)}" '
                   f'font-size="11" text-anchor="end">{t:.3g}</text>')
    for i, s in enumerate(series):
        label, sx, sy = s[0], np.asarray(s[1], float), np.asarray(s[2], float)
        dashed = len(s) > 3 and s[3]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(sx, sy))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        color = COLORS[i % len(COLORS)]
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{color}" stroke-width="1.6"{dash}/>')
        ly = MARGIN + 16 + 15 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 120}" y1="{ly - 4}" '
                   f'x2="{WIDTH - MARGIN - 96}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="1.6"{dash}/>')
        out.append(f'<text x="{WIDTH - MARGIN - 90}" y="{ly}" '
                   f'font-size="11">{label}</text>')
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="24" font-size="14" '
                   f'text-anchor="middle">{title}</text>')
    if xlabel:
        out.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" font-size="12" '
                   f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{HEIGHT // 2}" font-size="12" '
                   f'text-anchor="middle" '
                   f'transform="rotate(-90 16 {HEIGHT // 2})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
