"""Minimal self-contained SVG rendering of grid functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .evaluator import GridFunction, iterate
from .params import SelfSimilarParams

MAX_PLOT_SAMPLES = 2**20


@dataclass(frozen=True)
class PlotSpec:
    width: int = 800
    height: int = 600
    level: int | None = None
    stroke: float = 1.5
    xlabel: str = "x"
    ylabel: str = "f(x)"
    overlay: bool = False


def default_level(n: int, preferred: int = 10) -> int:
    level = preferred
    while level > 0 and n**level > MAX_PLOT_SAMPLES:
        level -= 1
    return level


def truncation_bound(p: SelfSimilarParams, level: int) -> float:
    """sup |f - f_level| for the piecewise-linear level interpolant."""
    md = p.max_abs_d
    g1 = iterate(p, 1)
    chord = g1.ys[0] + (g1.ys[-1] - g1.ys[0]) * g1.xs
    return md**level / (1.0 - md) * float(np.max(np.abs(g1.ys - chord)))


def tick_label(value: float, slack: float, max_den: int = 64) -> str:
    """Short fraction when one lies within ``slack`` of value, else decimal."""
    frac = Fraction(value).limit_denominator(max_den)
    if abs(float(frac) - value) <= slack + 1e-12:
        return str(frac)
    return f"{value:.4g}"


def _decimate(xs: np.ndarray, ys: np.ndarray, columns: int):
    """Keep first, last, min and max sample per pixel column, in x order."""
    if len(xs) <= 4 * columns:
        return xs, ys
    col = np.minimum((xs * columns).astype(np.int64), columns - 1)
    keep = np.zeros(len(xs), dtype=bool)
    keep[0] = keep[-1] = True
    starts = np.flatnonzero(np.r_[True, col[1:] != col[:-1]])
    ends = np.r_[starts[1:], len(xs)]
    for lo, hi in zip(starts.tolist(), ends.tolist()):
        seg = ys[lo:hi]
        keep[lo] = keep[hi - 1] = True
        keep[lo + int(np.argmin(seg))] = True
        keep[lo + int(np.argmax(seg))] = True
    return xs[keep], ys[keep]


def render_svg(grid: GridFunction, spec: PlotSpec, slack: float = 0.0, title: str = "",
               overlay: tuple[np.ndarray, np.ndarray] | None = None) -> str:
    margin_l, margin_r, margin_t, margin_b = 70, 20, 30, 50
    w, h = spec.width, spec.height
    pw, ph = w - margin_l - margin_r, h - margin_t - margin_b
    ymin, ymax = float(np.min(grid.ys)), float(np.max(grid.ys))
    lo, hi = min(ymin, 0.0), max(ymax, 0.0)
    if hi - lo < 1e-15:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(x):
        return margin_l + x * pw

    def sy(y):
        return margin_t + (hi - y) / (hi - lo) * ph

    xs, ys = _decimate(grid.xs, grid.ys, pw)
    pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(xs.tolist(), ys.tolist()))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<!-- selfsim {__version__} -->",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{w / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>')
    # axes: x axis at y = 0, y axis at x = 0
    out.append(f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(1):.3f}" y2="{sy(0):.3f}" stroke="black"/>')
    out.append(f'<line x1="{sx(0):.3f}" y1="{margin_t}" x2="{sx(0):.3f}" y2="{margin_t + ph}" stroke="black"/>')
    for xv in (0.0, 1.0):
        out.append(f'<text x="{sx(xv):.3f}" y="{sy(0) + 16:.3f}" text-anchor="middle" font-size="12">{int(xv)}</text>')
    ticks = {ymin: tick_label(ymin, slack), ymax: tick_label(ymax, slack)}
    close = 0.03 * (hi - lo)
    if hi - lo <= 6.0:
        for m in range(math.ceil(2 * ymin), math.floor(2 * ymax) + 1):
            yv = m / 2
            if all(abs(yv - t) > close for t in ticks):
                ticks[yv] = str(Fraction(m, 2))
    if all(abs(t) > close for t in ticks):
        ticks[0.0] = "0"
    for yv, label in sorted(ticks.items()):
        out.append(
            f'<line x1="{sx(0):.3f}" y1="{sy(yv):.3f}" x2="{sx(1):.3f}" y2="{sy(yv):.3f}" '
            f'stroke="gray" stroke-dasharray="3,4" stroke-width="0.5"/>'
        )
        out.append(
            f'<text x="{sx(0) - 6:.3f}" y="{sy(yv) + 4:.3f}" text-anchor="end" font-size="12">{escape(label)}</text>'
        )
    out.append(f'<text x="{sx(1):.3f}" y="{h - 10}" text-anchor="end" font-size="12">{escape(spec.xlabel)}</text>')
    out.append(f'<text x="12" y="{margin_t - 8}" font-size="12">{escape(spec.ylabel)}</text>')
    if overlay is not None:
        ox, oy = overlay
        opts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(ox.tolist(), oy.tolist()))
        out.append(f'<polyline fill="none" stroke="red" stroke-dasharray="6,4" stroke-width="{spec.stroke}" points="{opts}"/>')
    out.append(f'<polyline fill="none" stroke="black" stroke-width="{spec.stroke}" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_params(p: SelfSimilarParams, spec: PlotSpec = PlotSpec(), reference=None) -> str:
    level = spec.level if spec.level is not None else default_level(p.n)
    if p.n**level > MAX_PLOT_SAMPLES:
        raise ValueError(f"plot level {level} exceeds {MAX_PLOT_SAMPLES} samples")
    grid = iterate(p, level)
    overlay = None
    if spec.overlay and reference is not None:
        ox = np.linspace(0.0, 1.0, 401)
        oy = np.array([reference(x) for x in ox.tolist()])
        overlay = (ox, oy)
    slack = truncation_bound(p, level)
    if not math.isfinite(slack):
        slack = 0.0
    return render_svg(grid, spec, slack=slack, title=p.name, overlay=overlay)
