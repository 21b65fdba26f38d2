"""Hand-written SVG rendering of a tail curve.

No plotting library is involved so the output is byte-stable: every
coordinate is printed with two decimals.
"""

from __future__ import annotations

import math

import numpy as np

from .curve import TailCurve
from .tail_math import pareto_tail_value

WIDTH, HEIGHT = 800, 500
MARGIN = {"left": 70, "right": 70, "top": 30, "bottom": 55}
ALPHA_TICKS = (0.5, 1.0, 1.5, 2.0, 3.0)
DASH = "6 4"


def _c(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-12 * span:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    return [10.0**k for k in range(math.ceil(math.log10(lo)), math.floor(math.log10(hi)) + 1)]


def _fmt_tick(v: float) -> str:
    return f"{v:g}"


def render_svg(curve: TailCurve, log_x: bool = False, title: str = "") -> str:
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    u = curve.u
    if u.size == 0:
        raise ValueError("empty curve")
    u_lo, u_hi = float(u.min()), float(u.max())
    if u_hi == u_lo:
        u_hi = u_lo * 1.01 + 1e-9
    if log_x:
        fx_lo, fx_hi = math.log10(u_lo), math.log10(u_hi)

        def sx(v):
            return x0 + (math.log10(v) - fx_lo) / (fx_hi - fx_lo) * (x1 - x0)
    else:

        def sx(v):
            return x0 + (v - u_lo) / (u_hi - u_lo) * (x1 - x0)

    vals = np.concatenate([curve.t_hat, curve.lo[np.isfinite(curve.lo)], curve.hi[np.isfinite(curve.hi)]])
    t_top = min(1.0, math.ceil((float(vals.max()) + 0.05) * 10) / 10)
    t_bot = max(0.0, math.floor((float(vals.min()) - 0.05) * 10) / 10)

    def sy(t):
        return y0 - (t - t_bot) / (t_top - t_bot) * (y0 - y1)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">',
        '<rect x="0" y="0" width="800" height="500" fill="white"/>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{_c((x0 + x1) / 2)}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    xt = _log_ticks(u_lo, u_hi) if log_x else _nice_ticks(u_lo, u_hi)
    for v in xt:
        if not u_lo <= v <= u_hi:
            continue
        px = _c(sx(v))
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{y0 + 20}" text-anchor="middle" font-size="12">{_fmt_tick(v)}</text>')
    for v in _nice_ticks(t_bot, t_top):
        py = _c(sy(v))
        out.append(f'<line x1="{x0 - 5}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{py}" text-anchor="end" dominant-baseline="middle" font-size="12">{_fmt_tick(v)}</text>')
    for a in ALPHA_TICKS:
        t = pareto_tail_value(a)
        if not t_bot <= t <= t_top:
            continue
        py = _c(sy(t))
        out.append(f'<line x1="{x1}" y1="{py}" x2="{x1 + 5}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{x1 + 8}" y="{py}" dominant-baseline="middle" font-size="12">{_fmt_tick(a)}</text>')
    out.append(f'<text x="{_c((x0 + x1) / 2)}" y="{HEIGHT - 12}" text-anchor="middle" font-size="13">threshold u</text>')
    out.append(
        f'<text x="18" y="{_c((y0 + y1) / 2)}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {_c((y0 + y1) / 2)})">t(u)</text>'
    )
    out.append(
        f'<text x="{WIDTH - 14}" y="{_c((y0 + y1) / 2)}" text-anchor="middle" font-size="13" '
        f'transform="rotate(90 {WIDTH - 14} {_c((y0 + y1) / 2)})">alpha</text>'
    )

    def polyline(ys, dash: str | None) -> None:
        segment: list[str] = []
        chunks = []
        for uv, yv in zip(u, ys):
            if np.isfinite(yv):
                segment.append(f"{_c(sx(float(uv)))},{_c(sy(float(yv)))}")
            elif segment:
                chunks.append(segment)
                segment = []
        if segment:
            chunks.append(segment)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        for pts in chunks:
            out.append(f'<polyline fill="none" stroke="black" stroke-width="1.2"{extra} points="{" ".join(pts)}"/>')

    polyline(curve.t_hat, None)
    polyline(curve.lo, DASH)
    polyline(curve.hi, DASH)
    out.append("</svg>")
    return "\n".join(out) + "\n"
