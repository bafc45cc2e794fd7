"""Hand-rolled SVG of the shared two-fiducial state-space picture.

One drawing holds three theories at once: the gbit square with its four
deterministic vertices, the rebit as the inscribed circle, and the toy bit's
eigenstate geometry as dashed midlines.  The diagonal/circle intersection
points mark the rebit states of maximal certainty sum.
"""

from __future__ import annotations

import numpy as np

_SIZE = 480.0
_MARGIN = 40.0
_SCALE = _SIZE - 2.0 * _MARGIN


def _px(x: float) -> float:
    return _MARGIN + _SCALE * x


def _py(y: float) -> float:
    return _SIZE - _MARGIN - _SCALE * y  # SVG y axis points down


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def state_space_svg() -> str:
    """SVG text of the square/circle/diagonals state-space figure."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:g}" height="{_SIZE:g}" '
        f'viewBox="0 0 {_SIZE:g} {_SIZE:g}">',
        '  <desc>gbit square with inscribed rebit disc and toy-bit midlines; '
        'coordinates are fiducial outcome probabilities</desc>',
    ]

    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    path = " ".join(f"{_fmt(_px(x))},{_fmt(_py(y))}" for x, y in square)
    parts.append(f'  <polygon data-role="gdit-square" points="{path}" '
                 'fill="none" stroke="black" stroke-width="2"/>')

    parts.append(f'  <circle data-role="rebit-circle" cx="{_fmt(_px(0.5))}" '
                 f'cy="{_fmt(_py(0.5))}" r="{_fmt(_SCALE * 0.5)}" '
                 'data-x="0.5" data-y="0.5" data-radius="0.5" '
                 'fill="none" stroke="black" stroke-width="1.5"/>')

    for (x1, y1), (x2, y2) in [((0.0, 0.0), (1.0, 1.0)), ((0.0, 1.0), (1.0, 0.0))]:
        parts.append(f'  <line data-role="diagonal" x1="{_fmt(_px(x1))}" y1="{_fmt(_py(y1))}" '
                     f'x2="{_fmt(_px(x2))}" y2="{_fmt(_py(y2))}" '
                     'stroke="black" stroke-width="1"/>')
    for (x1, y1), (x2, y2) in [((0.0, 0.5), (1.0, 0.5)), ((0.5, 0.0), (0.5, 1.0))]:
        parts.append(f'  <line data-role="spekkens-midline" x1="{_fmt(_px(x1))}" '
                     f'y1="{_fmt(_py(y1))}" x2="{_fmt(_px(x2))}" y2="{_fmt(_py(y2))}" '
                     'stroke="black" stroke-width="1" stroke-dasharray="6 4"/>')

    for x, y in square:
        parts.append(f'  <circle data-role="gdit-vertex" data-x="{x:g}" data-y="{y:g}" '
                     f'cx="{_fmt(_px(x))}" cy="{_fmt(_py(y))}" r="4" fill="black"/>')
        anchor = "end" if x == 0.0 else "start"
        dx = -8 if x == 0.0 else 8
        dy = 16 if y == 0.0 else -8
        parts.append(f'  <text x="{_fmt(_px(x) + dx)}" y="{_fmt(_py(y) + dy)}" '
                     f'text-anchor="{anchor}" font-size="14">({x:g},{y:g})</text>')

    # Diagonal/circle intersections: the maximal-certainty rebit states.
    offset = 1.0 / (2.0 * np.sqrt(2.0))
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            x, y = 0.5 + sx * offset, 0.5 + sy * offset
            parts.append(f'  <circle data-role="uncertainty-point" '
                         f'data-x="{x:.12g}" data-y="{y:.12g}" '
                         f'cx="{_fmt(_px(x))}" cy="{_fmt(_py(y))}" r="4" '
                         'fill="white" stroke="black" stroke-width="1.5"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
