"""SVG rendering of planned or executed paths."""
from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .grid import GridSpec

PALETTE = (
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)
CELL_PX = 60
MARGIN_PX = 20


def _paths_of(obj) -> Mapping[int, Sequence]:
    if hasattr(obj, "paths") and isinstance(obj.paths, dict):  # SimTrace
        return obj.paths
    if hasattr(obj, "paths"):  # Solution
        return {p.agent_id: p.waypoints for p in obj.paths}
    return dict(obj)


def emit_svg(paths, spec: GridSpec, title: Optional[str] = None) -> str:
    """One polyline per agent through cell centres; dot at start, plus at goal."""
    paths = _paths_of(paths)
    w = spec.cols * CELL_PX + 2 * MARGIN_PX
    h = spec.rows * CELL_PX + 2 * MARGIN_PX

    def px(c):
        return (MARGIN_PX + (c[0] + 0.5) * CELL_PX,
                MARGIN_PX + (spec.rows - c[1] - 0.5) * CELL_PX)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    if title:
        esc = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f"  <title>{esc}</title>")
    out.append(f'  <rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>')
    for c in sorted(spec.blocked):
        x = MARGIN_PX + c[0] * CELL_PX
        y = MARGIN_PX + (spec.rows - c[1] - 1) * CELL_PX
        out.append(f'  <rect class="blocked" x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="#999999"/>')
    out.append('  <g class="grid" stroke="#cccccc" stroke-width="1">')
    for i in range(spec.cols + 1):
        x = MARGIN_PX + i * CELL_PX
        out.append(f'    <line x1="{x}" y1="{MARGIN_PX}" x2="{x}" y2="{h - MARGIN_PX}"/>')
    for j in range(spec.rows + 1):
        y = MARGIN_PX + j * CELL_PX
        out.append(f'    <line x1="{MARGIN_PX}" y1="{y}" x2="{w - MARGIN_PX}" y2="{y}"/>')
    out.append("  </g>")

    arm = CELL_PX * 0.15
    for k, aid in enumerate(sorted(paths)):
        cells = paths[aid]
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{x:g},{y:g}" for x, y in map(px, cells))
        out.append(f'  <g class="agent" data-agent="{aid}" stroke="{color}" fill="{color}">')
        out.append(f'    <polyline points="{pts}" fill="none" stroke-width="3"/>')
        sx, sy = px(cells[0])
        out.append(f'    <circle cx="{sx:g}" cy="{sy:g}" r="6"/>')
        gx, gy = px(cells[-1])
        out.append(f'    <line x1="{gx - arm:g}" y1="{gy:g}" x2="{gx + arm:g}" y2="{gy:g}" stroke-width="3"/>')
        out.append(f'    <line x1="{gx:g}" y1="{gy - arm:g}" x2="{gx:g}" y2="{gy + arm:g}" stroke-width="3"/>')
        out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
