"""SVG rendering of tessellations.

Cells are filled polygons with deterministic per-cell fills, division chords
are stroked on top, and the window boundary is dashed. The y axis is flipped
so the mathematical orientation renders upright.
"""

from __future__ import annotations

from .geometry import diameter
from .stit import Tessellation

# Muted qualitative palette; cells cycle through it by id.
PALETTE = (
    "#a6cee3",
    "#b2df8a",
    "#fdbf6f",
    "#cab2d6",
    "#fb9a99",
    "#ffff99",
    "#80b1d3",
    "#ccebc5",
    "#fccde5",
    "#d9d9d9",
)


def _fill_for(cell_id: int) -> str:
    return PALETTE[cell_id % len(PALETTE)]


def render_svg(tess: Tessellation, width_px: int = 640) -> str:
    """Render the tessellation as a standalone SVG document."""
    xs = [x for x, _ in tess.window.vertices]
    ys = [y for _, y in tess.window.vertices]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span_x = x1 - x0
    span_y = y1 - y0
    margin = 0.03 * max(span_x, span_y)
    stroke = 0.002 * diameter(tess.window)

    def flip(p: tuple[float, float]) -> tuple[float, float]:
        # Flip y so the origin sits at the bottom left.
        return (p[0], (y1 + y0) - p[1])

    def points(poly) -> str:
        return " ".join(f"{x:.6f},{y:.6f}" for x, y in map(flip, poly.vertices))

    height_px = max(1, round(width_px * (span_y + 2 * margin) / (span_x + 2 * margin)))
    view = f"{x0 - margin:.6f} {y0 - margin:.6f} {span_x + 2 * margin:.6f} {span_y + 2 * margin:.6f}"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
        f'viewBox="{view}">'
    ]
    for cell in tess.live_cells:
        if len(cell.polygon.vertices) < 3:
            continue
        parts.append(
            f'<polygon points="{points(cell.polygon)}" fill="{_fill_for(cell.id)}" stroke="none"/>'
        )
    for e in tess.internal_edges:
        (ax, ay), (bx, by) = flip(e.a), flip(e.b)
        parts.append(
            f'<line x1="{ax:.6f}" y1="{ay:.6f}" x2="{bx:.6f}" y2="{by:.6f}" '
            f'stroke="#1a1a1a" stroke-width="{stroke:.6f}"/>'
        )
    parts.append(
        f'<polygon points="{points(tess.window)}" fill="none" stroke="#333333" '
        f'stroke-width="{stroke:.6f}" stroke-dasharray="{4 * stroke:.6f},{4 * stroke:.6f}"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
