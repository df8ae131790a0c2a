"""Minimal SVG line charts: axes, polylines, markers, legend."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    style: str = "line"  # line | markers | dashed


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step) + 1)]


def line_chart(series: list[Series], title: str = "", xlabel: str = "", ylabel: str = "",
               width: int = 640, height: int = 420) -> str:
    ml, mr, mt, mb = 70, 20, 40, 55
    pw, ph = width - ml - mr, height - mt - mb
    xs = np.concatenate([np.asarray(s.x, float) for s in series]) if series else np.zeros(1)
    ys = np.concatenate([np.asarray(s.y, float) for s in series]) if series else np.zeros(1)
    ok = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = (xs[ok], ys[ok]) if ok.any() else (np.zeros(1), np.zeros(1))
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def X(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return mt + (y1 - v) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>']
    for tx in _ticks(x0, x1):
        out.append(f'<line x1="{X(tx):.2f}" y1="{mt + ph}" x2="{X(tx):.2f}" y2="{mt + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{X(tx):.2f}" y="{mt + ph + 18}" text-anchor="middle">{tx:g}</text>')
    for ty in _ticks(y0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{Y(ty):.2f}" x2="{ml}" y2="{Y(ty):.2f}" stroke="#333"/>')
        out.append(f'<line x1="{ml}" y1="{Y(ty):.2f}" x2="{ml + pw}" y2="{Y(ty):.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{ml - 8}" y="{Y(ty) + 4:.2f}" text-anchor="end">{ty:g}</text>')
    out.append(f'<text x="{width / 2}" y="{22}" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {mt + ph / 2})">{escape(ylabel)}</text>')

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = [(X(a), Y(b)) for a, b in zip(np.asarray(s.x, float), np.asarray(s.y, float))
               if math.isfinite(a) and math.isfinite(b)]
        if s.style == "markers":
            out.extend(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>' for px, py in pts)
        elif pts:
            dash = ' stroke-dasharray="6,4"' if s.style == "dashed" else ""
            path = " ".join(f"{px:.2f},{py:.2f}" for px, py in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        ly = mt + 14 + 16 * i
        out.append(f'<line x1="{ml + pw - 150}" y1="{ly}" x2="{ml + pw - 130}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw - 124}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
