"""SVG 1.1 drawings of halfplane patterns and their covering arcs."""

from __future__ import annotations

import math
from typing import Optional

from .pattern2d import HalfplanePattern, PatternVerdict, is_pinning_pattern

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _pt(cx: float, cy: float, r: float, deg: float) -> tuple:
    # screen y grows downwards
    a = math.radians(deg)
    return cx + r * math.cos(a), cy - r * math.sin(a)


def _arc_path(cx, cy, r, start, end) -> str:
    sweep = (end - start) % 360.0 or 360.0
    if sweep >= 359.999:
        # a full circle needs two half arcs
        x0, y0 = _pt(cx, cy, r, start)
        x1, y1 = _pt(cx, cy, r, start + 180.0)
        return (f"M {_fmt(x0)} {_fmt(y0)} A {_fmt(r)} {_fmt(r)} 0 1 0 {_fmt(x1)} {_fmt(y1)} "
                f"A {_fmt(r)} {_fmt(r)} 0 1 0 {_fmt(x0)} {_fmt(y0)}")
    x0, y0 = _pt(cx, cy, r, start)
    x1, y1 = _pt(cx, cy, r, end)
    large = 1 if sweep > 180.0 else 0
    return f"M {_fmt(x0)} {_fmt(y0)} A {_fmt(r)} {_fmt(r)} 0 {large} 0 {_fmt(x1)} {_fmt(y1)}"


def pattern_svg(P: HalfplanePattern, verdict: Optional[PatternVerdict] = None,
                size: int = 480) -> str:
    """Boundary lines, outward normals and, outside the unit circle, one ring
    per spanning-triple arc of admissible directions."""
    if verdict is None:
        verdict = is_pinning_pattern(P)
    c = size / 2.0
    R = size * 0.28
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{_fmt(c)}" cy="{_fmt(c)}" r="{_fmt(R)}" fill="none" '
        'stroke="#999" stroke-dasharray="3,3"/>',
    ]
    for i, a in enumerate(P.angles()):
        col = _PALETTE[i % len(_PALETTE)]
        x0, y0 = _pt(c, c, R * 1.05, a + 90.0)
        x1, y1 = _pt(c, c, R * 1.05, a - 90.0)
        out.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                   f'stroke="{col}" stroke-width="1.5"/>')
        # the halfplane itself lies opposite the normal
        out.append(f'<path d="M {_fmt(x0)} {_fmt(y0)} '
                   f'{_arc_path(c, c, R * 1.05, a + 90.0, a + 270.0)[2:]} Z" fill="{col}" '
                   'fill-opacity="0.06" stroke="none" class="halfplane"/>')
        xn, yn = _pt(c, c, R * 0.6, a)
        out.append(f'<line x1="{_fmt(c)}" y1="{_fmt(c)}" x2="{_fmt(xn)}" y2="{_fmt(yn)}" '
                   f'stroke="{col}" stroke-width="2.5"/>')
        xl, yl = _pt(c, c, R * 0.72, a)
        out.append(f'<text x="{_fmt(xl)}" y="{_fmt(yl)}" font-family="sans-serif" '
                   f'font-size="14" text-anchor="middle" dominant-baseline="middle" '
                   f'fill="{col}">{i + 1}</text>')
    for k, (triple, arc) in enumerate(verdict.arcs):
        r = R * (1.18 + 0.1 * k)
        out.append(f'<path d="{_arc_path(c, c, r, arc.start_deg, arc.end_deg)}" class="arc" '
                   'fill="none" stroke="black" stroke-width="2"/>')
        xl, yl = _pt(c, c, r, arc.start_deg + ((arc.end_deg - arc.start_deg) % 360.0) / 2)
        label = "{" + ",".join(str(t + 1) for t in triple) + "}"
        out.append(f'<text x="{_fmt(xl)}" y="{_fmt(yl - 4)}" font-family="sans-serif" '
                   f'font-size="10" text-anchor="middle">{label}</text>')
    status = "pinning pattern" if verdict.is_pinning else "not a pinning pattern"
    out.append(f'<text x="8" y="{size - 10}" font-family="sans-serif" font-size="13">'
               f'{len(P)} halfplanes, {len(verdict.arcs)} arcs: {status}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
