"""SVG renderings of pairwise constraint evidence.

Plain hand-written SVG keeps the output dependency-free and lets tests
parse coordinates back out. Axes are min-max scaled independently; a
zero-range axis puts every vertex at the axis midpoint.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = ["emit_parallel_coordinates_svg", "emit_scatter_svg"]

_WIDTH = 640
_HEIGHT = 480
_TOP = 60.0
_BOTTOM = 430.0
_LEFT = 140.0
_RIGHT = 500.0


def _scale(values: np.ndarray, low: float, high: float) -> np.ndarray:
    vmin = float(values.min())
    vmax = float(values.max())
    if vmax - vmin <= 0.0:
        return np.full(values.shape, (low + high) / 2.0)
    return low + (values - vmin) / (vmax - vmin) * (high - low)


def _coord(value: float) -> str:
    return f"{value:.4f}"


def _svg_document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    )
    return "\n".join([head, *body, "</svg>", ""])


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_parallel_coordinates_svg(
    values_i: Sequence[float], values_j: Sequence[float], names: Sequence[str], path
) -> None:
    """Two labeled vertical axes; one polyline per sample point.

    Vertex height is linear in the constraint value on that axis
    (higher value, higher vertex), so a pair of samples in conflict
    renders as crossing lines.
    """
    vi = np.asarray(values_i, dtype=float)
    vj = np.asarray(values_j, dtype=float)
    if vi.shape != vj.shape or vi.ndim != 1:
        raise ValueError("value vectors must have equal length")
    if vi.size < 2:
        raise ValueError("parallel-coordinate plot needs at least 2 points")
    # SVG y grows downward; flip so larger values sit higher
    yi = _scale(vi, _BOTTOM, _TOP)
    yj = _scale(vj, _BOTTOM, _TOP)
    body = [
        f'<line class="axis" x1="{_coord(_LEFT)}" y1="{_coord(_TOP)}" '
        f'x2="{_coord(_LEFT)}" y2="{_coord(_BOTTOM)}" stroke="black"/>',
        f'<line class="axis" x1="{_coord(_RIGHT)}" y1="{_coord(_TOP)}" '
        f'x2="{_coord(_RIGHT)}" y2="{_coord(_BOTTOM)}" stroke="black"/>',
        f'<text class="axis-label" x="{_coord(_LEFT)}" y="{_HEIGHT - 20}" '
        f'text-anchor="middle">{_escape(names[0])}</text>',
        f'<text class="axis-label" x="{_coord(_RIGHT)}" y="{_HEIGHT - 20}" '
        f'text-anchor="middle">{_escape(names[1])}</text>',
    ]
    for a in range(vi.size):
        points = f"{_coord(_LEFT)},{_coord(float(yi[a]))} {_coord(_RIGHT)},{_coord(float(yj[a]))}"
        body.append(
            f'<polyline class="sample" points="{points}" fill="none" '
            f'stroke="steelblue" stroke-opacity="0.6"/>'
        )
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_svg_document(body))


def emit_scatter_svg(
    values_i: Sequence[float], values_j: Sequence[float], names: Sequence[str], path
) -> None:
    """Scatter of the constraint vectors (f_i, f_j), axes min-max scaled."""
    vi = np.asarray(values_i, dtype=float)
    vj = np.asarray(values_j, dtype=float)
    if vi.shape != vj.shape or vi.ndim != 1:
        raise ValueError("value vectors must have equal length")
    if vi.size < 1:
        raise ValueError("scatter plot needs at least 1 point")
    xs = _scale(vi, _LEFT, _RIGHT)
    ys = _scale(vj, _BOTTOM, _TOP)
    body = [
        f'<line class="axis" x1="{_coord(_LEFT)}" y1="{_coord(_BOTTOM)}" '
        f'x2="{_coord(_RIGHT)}" y2="{_coord(_BOTTOM)}" stroke="black"/>',
        f'<line class="axis" x1="{_coord(_LEFT)}" y1="{_coord(_BOTTOM)}" '
        f'x2="{_coord(_LEFT)}" y2="{_coord(_TOP)}" stroke="black"/>',
        f'<text class="axis-label" x="{_coord((_LEFT + _RIGHT) / 2)}" y="{_HEIGHT - 20}" '
        f'text-anchor="middle">{_escape(names[0])}</text>',
        f'<text class="axis-label" x="30" y="{_coord((_TOP + _BOTTOM) / 2)}" '
        f'text-anchor="middle" transform="rotate(-90 30 {_coord((_TOP + _BOTTOM) / 2)})">'
        f"{_escape(names[1])}</text>",
    ]
    for a in range(vi.size):
        body.append(
            f'<circle class="point" cx="{_coord(float(xs[a]))}" cy="{_coord(float(ys[a]))}" '
            f'r="3" fill="indianred" fill-opacity="0.7"/>'
        )
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(_svg_document(body))
