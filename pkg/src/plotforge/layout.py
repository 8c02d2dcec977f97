"""Device-space geometry: content rectangles, axis strips, title bands.

Pure integer-pixel layout driven by a fixed metrics table (monospace advance
0.6*size, line height 1.2*size), so results are deterministic and independent
of the rasterizer.  Rectangles are half-open pixel ranges [x0,x1) x [y0,y1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import LayoutError
from .model import Axis, Margins, PlotNode, Side, find_transform
from .ticks import TickSet, generate_ticks

FONT_SIZE = 10.0
TITLE_SIZE = 15.0
MAJOR_TICK = 6
MINOR_TICK = 3
AXIS_PAD = 4
MIN_CONTENT = 16
MIN_CANVAS = 64


def text_width(text: str, size: float = FONT_SIZE) -> int:
    return math.ceil(len(text) * 0.6 * size)


def line_height(size: float = FONT_SIZE) -> int:
    return math.ceil(1.2 * size)


@dataclass(frozen=True)
class Rect:
    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def w(self) -> int:
        return self.x1 - self.x0

    @property
    def h(self) -> int:
        return self.y1 - self.y0

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1


@dataclass(frozen=True)
class AxisGeometry:
    index: int
    side: Side
    strip: Rect
    ticks: TickSet


@dataclass(frozen=True)
class NodeGeometry:
    outer: Rect  # cell minus margins; strips and title live here
    content: Rect  # the drawing box
    title_band: Rect | None
    axes: tuple[AxisGeometry, ...]


@dataclass(frozen=True)
class GeometryMap:
    width: int
    height: int
    nodes: dict = field(default_factory=dict)  # node id -> NodeGeometry


def measure_axis(ticks: TickSet, axis: Axis) -> int:
    """Strip thickness in px: tick length + label extent + axis-label extent + 4."""
    if not axis.visible:
        return 0
    label_extent = 0
    if axis.ticks.labels_visible and ticks.major:
        if axis.side.horizontal:
            label_extent = line_height()
        else:
            label_extent = max(text_width(s) for _, s in ticks.major)
    axis_label_extent = line_height() if axis.label else 0
    return MAJOR_TICK + label_extent + axis_label_extent + AXIS_PAD


def layout(scene: PlotNode, width: int, height: int) -> GeometryMap:
    if width < MIN_CANVAS or height < MIN_CANVAS:
        raise LayoutError("CANVAS_TOO_SMALL", f"canvas {width}x{height} below minimum {MIN_CANVAS}x{MIN_CANVAS}")
    gm = GeometryMap(width=width, height=height)
    _layout_node(scene, Rect(0, 0, width, height), gm)
    return gm


def _layout_node(node: PlotNode, cell: Rect, gm: GeometryMap) -> None:
    m = node.margins or Margins()
    outer = Rect(
        cell.x0 + round(m.left), cell.y0 + round(m.top), cell.x1 - round(m.right), cell.y1 - round(m.bottom)
    )
    title_band = None
    top_used = 0
    if node.title:
        band_h = line_height(TITLE_SIZE) + AXIS_PAD
        title_band = Rect(outer.x0, outer.y0, outer.x1, outer.y0 + band_h)
        top_used = band_h

    measured: list[tuple[int, Axis, TickSet, int]] = []
    for i, axis in enumerate(node.axes):
        tr = find_transform(node, axis.transform, f"axes[{i}].transform")
        ticks = generate_ticks(tr, axis.ticks)
        measured.append((i, axis, ticks, measure_axis(ticks, axis)))

    totals = {Side.LEFT: 0, Side.RIGHT: 0, Side.TOP: top_used, Side.BOTTOM: 0}
    for _, axis, _, t in measured:
        if axis.visible:
            totals[axis.side] += t
    content = Rect(
        outer.x0 + totals[Side.LEFT],
        outer.y0 + totals[Side.TOP],
        outer.x1 - totals[Side.RIGHT],
        outer.y1 - totals[Side.BOTTOM],
    )
    if content.w < MIN_CONTENT or content.h < MIN_CONTENT:
        raise LayoutError(
            "CANVAS_TOO_SMALL",
            f"content rect of node '{node.id}' is {content.w}x{content.h}, below {MIN_CONTENT}x{MIN_CONTENT}",
        )

    # strips stack outward from the box edge, in declaration order
    offsets = {Side.LEFT: 0, Side.RIGHT: 0, Side.TOP: 0, Side.BOTTOM: 0}
    axis_geoms = []
    for i, axis, ticks, t in measured:
        if not axis.visible:
            axis_geoms.append(AxisGeometry(i, axis.side, Rect(0, 0, 0, 0), ticks))
            continue
        off = offsets[axis.side]
        offsets[axis.side] += t
        if axis.side is Side.BOTTOM:
            strip = Rect(outer.x0, content.y1 + off, outer.x1, content.y1 + off + t)
        elif axis.side is Side.TOP:
            strip = Rect(outer.x0, content.y0 - off - t, outer.x1, content.y0 - off)
        elif axis.side is Side.LEFT:
            strip = Rect(content.x0 - off - t, outer.y0, content.x0 - off, outer.y1)
        else:
            strip = Rect(content.x1 + off, outer.y0, content.x1 + off + t, outer.y1)
        axis_geoms.append(AxisGeometry(i, axis.side, strip, ticks))

    gm.nodes[node.id] = NodeGeometry(outer=outer, content=content, title_band=title_band, axes=tuple(axis_geoms))

    if node.children:
        _layout_children(node, content, gm)


def _layout_children(node: PlotNode, content: Rect, gm: GeometryMap) -> None:
    rows = max(c.layout_hints.cell[0] for c in node.children) + 1
    cols = max(c.layout_hints.cell[1] for c in node.children) + 1
    # a row/col weight is the largest weight among the children occupying it
    col_w = [1.0] * cols
    row_w = [1.0] * rows
    seen_c = [False] * cols
    seen_r = [False] * rows
    for child in node.children:
        r, c = child.layout_hints.cell
        w = child.layout_hints.weight
        col_w[c] = w if not seen_c[c] else max(col_w[c], w)
        row_w[r] = w if not seen_r[r] else max(row_w[r], w)
        seen_c[c], seen_r[r] = True, True

    def edges(x0: int, extent: int, weights: list[float]) -> list[int]:
        total = sum(weights)
        cum = 0.0
        out = [x0]
        for w in weights:
            cum += w
            out.append(x0 + round(extent * cum / total))
        return out

    xs = edges(content.x0, content.w, col_w)
    ys = edges(content.y0, content.h, row_w)
    for child in node.children:
        r, c = child.layout_hints.cell
        _layout_node(child, Rect(xs[c], ys[r], xs[c + 1], ys[r + 1]), gm)


# --- device mapping helpers ----------------------------------------------------


def to_device_x(t: float, content: Rect) -> float:
    return content.x0 + t * content.w


def to_device_y(t: float, content: Rect) -> float:
    # normalized 0 sits at the bottom edge; device y grows downward
    return content.y1 - t * content.h


def from_device_x(px: float, content: Rect) -> float:
    return (px - content.x0) / content.w


def from_device_y(px: float, content: Rect) -> float:
    return (content.y1 - px) / content.h
