"""Minimal self-contained SVG line plots."""

from typing import Dict, Sequence
from xml.sax.saxutils import escape

import numpy as np

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
W, H = 640, 420
ML, MR, MT, MB = 70, 20, 30, 50


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


def line_plot(
    x: Sequence[float],
    series: Dict[str, Sequence[float]],
    *,
    xlabel: str = "",
    ylabel: str = "",
    title: str = "",
    zero_line: bool = True,
) -> str:
    """Render one polyline per named series over a shared x grid."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    ylo, yhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if zero_line:
        ylo, yhi = min(ylo, 0.0), max(yhi, 0.0)
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    xlo, xhi = (float(x.min()), float(x.max())) if x.size else (0.0, 1.0)
    if xhi == xlo:
        xlo, xhi = xlo - 1.0, xhi + 1.0

    def px(v):
        return ML + (v - xlo) / (xhi - xlo) * (W - ML - MR)

    def py(v):
        return H - MB - (v - ylo) / (yhi - ylo) * (H - MT - MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
        f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>',
    ]
    for t in _ticks(xlo, xhi):
        out.append(f'<text x="{px(t):.2f}" y="{H - MB + 18}" font-size="11" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(ylo, yhi):
        out.append(f'<text x="{ML - 6}" y="{py(t) + 4:.2f}" font-size="11" text-anchor="end">{t:.3g}</text>')
    if zero_line and ylo < 0.0 < yhi:
        out.append(f'<line x1="{ML}" y1="{py(0.0):.2f}" x2="{W - MR}" y2="{py(0.0):.2f}" '
                   'stroke="gray" stroke-dasharray="4 3"/>')
    for i, (name, y) in enumerate(ys.items()):
        color = _COLORS[i % len(_COLORS)]
        ok = np.isfinite(y)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{W - MR - 5}" y="{MT + 14 * (i + 1)}" font-size="11" fill="{color}" '
                   f'text-anchor="end">{escape(name)}</text>')
    out.append(f'<text x="{(ML + W - MR) / 2}" y="{H - 12}" font-size="13" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(MT + H - MB) / 2}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 16 {(MT + H - MB) / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{W / 2}" y="18" font-size="14" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
