"""Per-component draw lists and tile identity.

A component is the unit of caching and invalidation: one per visible layer,
per visible axis, per node annotation group, per node decoration.  Each gets
a device rect, a content hash (state + transforms it reads + rect), and a
draw list in absolute device coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import font
from .canonical import content_hash
from .draw import FillCircle, FillPolygon, FillRect, Image, Polyline, PopClip, PushClip, StrokeCircle, Text
from .layout import (
    AXIS_PAD,
    FONT_SIZE,
    MAJOR_TICK,
    MINOR_TICK,
    TITLE_SIZE,
    GeometryMap,
    NodeGeometry,
    Rect,
    line_height,
    text_width,
)
from .model import (
    Axis,
    AxisKind,
    AxisTransform,
    ChartKind,
    ComponentId,
    GridGraph,
    GridNorm,
    HLineAnnotation,
    Layer,
    LineKind,
    PlotNode,
    RampKind,
    RectAnnotation,
    RgbGraph,
    Side,
    Style,
    SymbolKind,
    TextAnnotation,
    VLineAnnotation,
    XYErrorGraph,
    XYGraph,
    find_transform,
    iter_nodes,
    primary_transforms,
    scene_components,
)
from .transforms import forward

GRID_LINE_COLOR = (200, 200, 200, 255)
EDGE_COLOR = (0, 0, 0, 255)


def _fwd(tr: AxisTransform, v: float) -> float:
    """forward() that yields NaN for unmappable samples instead of raising."""
    if math.isnan(v):
        return math.nan
    if tr.kind is AxisKind.LOG and v <= 0:
        return math.nan
    return forward(tr, v)


def _dev_x(tr: AxisTransform, v: float, content: Rect) -> float:
    return content.x0 + _fwd(tr, v) * content.w


def _dev_y(tr: AxisTransform, v: float, content: Rect) -> float:
    return content.y1 - _fwd(tr, v) * content.h


# --- tile specs -----------------------------------------------------------------


@dataclass(frozen=True)
class TileSpec:
    cid: ComponentId
    rect: Rect
    key: str


def _bbox(a: Rect, b: Rect) -> Rect:
    return Rect(min(a.x0, b.x0), min(a.y0, b.y0), max(a.x1, b.x1), max(a.y1, b.y1))


def _rect_part(r: Rect) -> tuple:
    return (r.x0, r.y0, r.x1, r.y1)


def tile_specs(scene: PlotNode, gm: GeometryMap) -> list[TileSpec]:
    """Tile identity for every component, in composition order."""
    by_node = {n.id: n for n in iter_nodes(scene)}
    out = []
    for cid in scene_components(scene):
        node = by_node[cid[1]]
        ng: NodeGeometry = gm.nodes[node.id]
        kind = cid[0]
        if kind == "layer":
            layer = next(l for l in node.layers if l.id == cid[2])
            trx = find_transform(node, layer.x_transform, "layer")
            try_ = find_transform(node, layer.y_transform, "layer")
            rect = ng.content
            key = content_hash("layer", layer, trx, try_, _rect_part(rect))
        elif kind == "axis":
            axis = node.axes[cid[2]]
            tr = find_transform(node, axis.transform, "axis")
            rect = _bbox(ng.axes[cid[2]].strip, ng.content)
            key = content_hash("axis", axis, tr, _rect_part(rect), _rect_part(ng.content))
        elif kind == "annotations":
            px, py = primary_transforms(node)
            rect = ng.content
            key = content_hash("annotations", node.annotations, px, py, _rect_part(rect))
        else:  # decoration
            rect = ng.title_band
            key = content_hash("decoration", node.title, _rect_part(rect))
        out.append(TileSpec(cid=cid, rect=rect, key=key))
    return out


# --- layer ----------------------------------------------------------------------


def _split_nan(points: list[tuple[float, float]]) -> list[list[tuple[float, float]]]:
    runs, current = [], []
    for p in points:
        if math.isnan(p[0]) or math.isnan(p[1]):
            if len(current) >= 2:
                runs.append(current)
            current = []
        else:
            current.append(p)
    if len(current) >= 2:
        runs.append(current)
    return runs


def _symbol_prims(px: float, py: float, style: Style) -> list:
    s = style.symbol_size
    half = s / 2.0
    c, w = style.color, style.stroke_width
    if style.symbol is SymbolKind.CIRCLE:
        return [StrokeCircle(px, py, half, c, w)]
    if style.symbol is SymbolKind.DOT:
        return [FillCircle(px, py, max(s / 4.0, 1.0), c)]
    if style.symbol is SymbolKind.SQUARE:
        pts = ((px - half, py - half), (px + half, py - half), (px + half, py + half), (px - half, py + half), (px - half, py - half))
        return [Polyline(pts, c, w)]
    if style.symbol is SymbolKind.CROSS:
        return [
            Polyline(((px - half, py), (px + half, py)), c, w),
            Polyline(((px, py - half), (px, py + half)), c, w),
        ]
    if style.symbol is SymbolKind.TRIANGLE:
        k = half * 1.1547  # circumradius for an equilateral side ~= symbol size
        pts = ((px, py - k), (px + k * 0.866, py + k * 0.5), (px - k * 0.866, py + k * 0.5), (px, py - k))
        return [Polyline(pts, c, w)]
    return []


def _histogram_points(xs: list[float], ys: list[float]) -> list[tuple[float, float]]:
    """Step path with bin edges at midpoints; outer edges mirror the nearest
    interval (lone points get unit-width bins)."""
    n = len(xs)
    if n == 0:
        return []
    if n == 1:
        e = [xs[0] - 0.5, xs[0] + 0.5]
    else:
        mids = [(a + b) / 2.0 for a, b in zip(xs, xs[1:])]
        e = [xs[0] - (xs[1] - xs[0]) / 2.0] + mids + [xs[-1] + (xs[-1] - xs[-2]) / 2.0]
    pts: list[tuple[float, float]] = []
    for i in range(n):
        pts.append((e[i], ys[i]))
        pts.append((e[i + 1], ys[i]))
    return pts


def _line_prims(points: list[tuple[float, float]], style: Style) -> list:
    if style.line is LineKind.NONE:
        return []
    dash = style.dash if style.line is LineKind.DASHED else None
    return [
        Polyline(tuple(run), style.color, style.stroke_width, dash)
        for run in _split_nan(points)
    ]


def _xy_prims(xs, ys, style: Style, trx, try_, content: Rect) -> list:
    dev = [(_dev_x(trx, x, content), _dev_y(try_, y, content)) for x, y in zip(xs, ys)]
    prims = []
    if style.chart is ChartKind.HISTOGRAM:
        runs = _split_nan([(x, y) for x, y in zip(xs, ys)])
        for run in runs:
            steps = _histogram_points([p[0] for p in run], [p[1] for p in run])
            mapped = [(_dev_x(trx, x, content), _dev_y(try_, y, content)) for x, y in steps]
            prims.extend(_line_prims(mapped, style))
    else:
        prims.extend(_line_prims(dev, style))
    if style.symbol is not SymbolKind.NONE:
        for px, py in dev:
            if not (math.isnan(px) or math.isnan(py)):
                prims.extend(_symbol_prims(px, py, style))
    return prims


def _error_bar_prims(g: XYErrorGraph, trx, try_, content: Rect) -> list:
    prims = []
    c, w = g.style.color, g.style.stroke_width
    cap = w  # caps are 2*stroke_width long, so half-length w each side
    for i, (x, y) in enumerate(zip(g.x, g.y)):
        px, py = _dev_x(trx, x, content), _dev_y(try_, y, content)
        if math.isnan(px) or math.isnan(py):
            continue
        for arr, sign, vertical in (
            (g.y_err_lo, -1, True),
            (g.y_err_hi, +1, True),
            (g.x_err_lo, -1, False),
            (g.x_err_hi, +1, False),
        ):
            if arr is None or math.isnan(arr[i]):
                continue
            if vertical:
                qy = _dev_y(try_, y + sign * arr[i], content)
                if math.isnan(qy):
                    continue
                prims.append(Polyline(((px, py), (px, qy)), c, w))
                prims.append(Polyline(((px - cap, qy), (px + cap, qy)), c, w))
            else:
                qx = _dev_x(trx, x + sign * arr[i], content)
                if math.isnan(qx):
                    continue
                prims.append(Polyline(((px, py), (qx, py)), c, w))
                prims.append(Polyline(((qx, py - cap), (qx, py + cap)), c, w))
    return prims


def _ramp_rgb(t: np.ndarray, ramp: RampKind) -> np.ndarray:
    """t in [0,1] (h, w) -> uint8 (h, w, 3)."""
    t = np.clip(t, 0.0, 1.0)
    if ramp is RampKind.GRAY:
        g = np.rint(t * 255.0).astype(np.uint8)
        return np.stack([g, g, g], axis=-1)
    # heat: black -> red -> yellow -> white
    r = np.clip(t * 3.0, 0.0, 1.0)
    g = np.clip(t * 3.0 - 1.0, 0.0, 1.0)
    b = np.clip(t * 3.0 - 2.0, 0.0, 1.0)
    return np.rint(np.stack([r, g, b], axis=-1) * 255.0).astype(np.uint8)


def _image_rect(trx, try_, x_extent, y_extent, content: Rect) -> Rect | None:
    xs = sorted((_dev_x(trx, x_extent.lo, content), _dev_x(trx, x_extent.hi, content)))
    ys = sorted((_dev_y(try_, y_extent.lo, content), _dev_y(try_, y_extent.hi, content)))
    if any(math.isnan(v) for v in xs + ys):
        return None
    # a pixel belongs to the image if its center falls inside the device box
    x0 = max(content.x0, math.ceil(xs[0] - 0.5))
    x1 = min(content.x1, math.floor(xs[1] - 0.5) + 1)
    y0 = max(content.y0, math.ceil(ys[0] - 0.5))
    y1 = min(content.y1, math.floor(ys[1] - 0.5) + 1)
    if x1 <= x0 or y1 <= y0:
        return None
    return Rect(x0, y0, x1, y1)


def _sample_indices(tr, extent, centers: np.ndarray, n: int) -> np.ndarray:
    # device pixel center -> data -> extent fraction -> cell index
    from .transforms import inverse

    data = np.array([inverse(tr, t) for t in centers])
    u = (data - extent.lo) / extent.span
    return np.clip((u * n).astype(int), 0, n - 1)


def _grid_image(g: GridGraph, trx, try_, content: Rect) -> Image | None:
    rect = _image_rect(trx, try_, g.x_extent, g.y_extent, content)
    if rect is None:
        return None
    vals = np.array(g.values, dtype=np.float64)
    nrows, ncols = vals.shape
    tx = (np.arange(rect.x0, rect.x1) + 0.5 - content.x0) / content.w
    ty = (content.y1 - (np.arange(rect.y0, rect.y1) + 0.5)) / content.h
    cols = _sample_indices(trx, g.x_extent, tx, ncols)
    rows = _sample_indices(try_, g.y_extent, ty, nrows)  # row 0 at y_extent.lo
    sampled = vals[np.ix_(rows, cols)]
    if g.norm is GridNorm.EXPLICIT:
        lo, hi = g.norm_range.lo, g.norm_range.hi
    else:
        finite = vals[np.isfinite(vals)]
        lo = float(finite.min()) if finite.size else 0.0
        hi = float(finite.max()) if finite.size else 1.0
        if hi <= lo:
            hi = lo + 1.0
    t = (sampled - lo) / (hi - lo)
    rgb = _ramp_rgb(np.nan_to_num(t, nan=0.0), g.ramp)
    rgb[~np.isfinite(sampled)] = 255  # NaN cells render white
    return Image(rect.x0, rect.y0, rect.x1, rect.y1, rgb)


def _rgb_image(g: RgbGraph, trx, try_, content: Rect) -> Image | None:
    rect = _image_rect(trx, try_, g.x_extent, g.y_extent, content)
    if rect is None:
        return None
    planes = [np.array(p, dtype=np.float64) for p in (g.r, g.g, g.b)]
    nrows, ncols = planes[0].shape
    tx = (np.arange(rect.x0, rect.x1) + 0.5 - content.x0) / content.w
    ty = (content.y1 - (np.arange(rect.y0, rect.y1) + 0.5)) / content.h
    cols = _sample_indices(trx, g.x_extent, tx, ncols)
    rows = _sample_indices(try_, g.y_extent, ty, nrows)
    chans = [
        np.rint(np.clip(np.nan_to_num(p[np.ix_(rows, cols)], nan=1.0), 0.0, 1.0) * 255.0).astype(np.uint8)
        for p in planes
    ]
    return Image(rect.x0, rect.y0, rect.x1, rect.y1, np.stack(chans, axis=-1))


def layer_drawlist(node: PlotNode, layer: Layer, content: Rect) -> list:
    trx = find_transform(node, layer.x_transform, "layer.x_transform")
    try_ = find_transform(node, layer.y_transform, "layer.y_transform")
    prims: list = [PushClip(content.x0, content.y0, content.x1, content.y1)]
    for g in layer.graphs:
        if isinstance(g, XYGraph):
            prims.extend(_xy_prims(g.x, g.y, g.style, trx, try_, content))
        elif isinstance(g, XYErrorGraph):
            prims.extend(_xy_prims(g.x, g.y, g.style, trx, try_, content))
            prims.extend(_error_bar_prims(g, trx, try_, content))
        elif isinstance(g, GridGraph):
            img = _grid_image(g, trx, try_, content)
            if img is not None:
                prims.append(img)
        else:
            img = _rgb_image(g, trx, try_, content)
            if img is not None:
                prims.append(img)
    prims.append(PopClip())
    return prims


# --- axes -----------------------------------------------------------------------


def axis_drawlist(node: PlotNode, index: int, ng: NodeGeometry) -> list:
    axis = node.axes[index]
    if not axis.visible:
        return []
    ag = ng.axes[index]
    tr = find_transform(node, axis.transform, "axis.transform")
    content, strip = ng.content, ag.strip
    side = axis.side
    prims: list = []

    def dev(v: float) -> float:
        t = _fwd(tr, v)
        if math.isnan(t) or t < -1e-9 or t > 1 + 1e-9:
            return math.nan
        return content.x0 + t * content.w if side.horizontal else content.y1 - t * content.h

    majors = [(dev(v), label) for v, label in ag.ticks.major]
    majors = [(p, s) for p, s in majors if not math.isnan(p)]
    minors = [dev(v) for v in ag.ticks.minor]
    minors = [p for p in minors if not math.isnan(p)]

    if axis.grid_lines:
        for p, _ in majors:
            if side.horizontal:
                line = ((p, float(content.y0)), (p, float(content.y1)))
            else:
                line = ((float(content.x0), p), (float(content.x1), p))
            prims.append(Polyline(line, GRID_LINE_COLOR, 1.0))

    # box edge on the content boundary
    if side is Side.BOTTOM:
        edge = ((content.x0, content.y1 - 0.5), (content.x1, content.y1 - 0.5))
    elif side is Side.TOP:
        edge = ((content.x0, content.y0 + 0.5), (content.x1, content.y0 + 0.5))
    elif side is Side.LEFT:
        edge = ((content.x0 + 0.5, content.y0), (content.x0 + 0.5, content.y1))
    else:
        edge = ((content.x1 - 0.5, content.y0), (content.x1 - 0.5, content.y1))
    prims.append(Polyline(edge, EDGE_COLOR, 1.0))

    def tick_prim(p: float, length: int) -> Polyline:
        inward = not axis.outward
        if side is Side.BOTTOM:
            y0, y1 = (content.y1 - length, content.y1) if inward else (strip.y0, strip.y0 + length)
            return Polyline(((p, float(y0)), (p, float(y1))), EDGE_COLOR, 1.0)
        if side is Side.TOP:
            y0, y1 = (content.y0, content.y0 + length) if inward else (strip.y1 - length, strip.y1)
            return Polyline(((p, float(y0)), (p, float(y1))), EDGE_COLOR, 1.0)
        if side is Side.LEFT:
            x0, x1 = (content.x0, content.x0 + length) if inward else (strip.x1 - length, strip.x1)
            return Polyline(((float(x0), p), (float(x1), p)), EDGE_COLOR, 1.0)
        x0, x1 = (content.x1 - length, content.x1) if inward else (strip.x0, strip.x0 + length)
        return Polyline(((float(x0), p), (float(x1), p)), EDGE_COLOR, 1.0)

    for p, _ in majors:
        prims.append(tick_prim(p, MAJOR_TICK))
    for p in minors:
        prims.append(tick_prim(p, MINOR_TICK))

    gh = font.glyph_box(FONT_SIZE)[1]
    label_extent = 0
    if axis.ticks.labels_visible and majors:
        label_extent = line_height() if side.horizontal else max(text_width(s) for _, s in majors)
        for p, s in majors:
            w = text_width(s)
            if side is Side.BOTTOM:
                prims.append(Text(p - w / 2.0, strip.y0 + MAJOR_TICK + (line_height() - gh) / 2.0, s, FONT_SIZE, EDGE_COLOR))
            elif side is Side.TOP:
                prims.append(Text(p - w / 2.0, strip.y1 - MAJOR_TICK - line_height() + (line_height() - gh) / 2.0, s, FONT_SIZE, EDGE_COLOR))
            elif side is Side.LEFT:
                prims.append(Text(strip.x1 - MAJOR_TICK - w, p - gh / 2.0, s, FONT_SIZE, EDGE_COLOR))
            else:
                prims.append(Text(strip.x0 + MAJOR_TICK, p - gh / 2.0, s, FONT_SIZE, EDGE_COLOR))

    if axis.label:
        w = text_width(axis.label)
        if side is Side.BOTTOM:
            prims.append(Text((content.x0 + content.x1) / 2.0 - w / 2.0, strip.y0 + MAJOR_TICK + label_extent + (line_height() - gh) / 2.0, axis.label, FONT_SIZE, EDGE_COLOR))
        elif side is Side.TOP:
            prims.append(Text((content.x0 + content.x1) / 2.0 - w / 2.0, strip.y1 - MAJOR_TICK - label_extent - line_height() + (line_height() - gh) / 2.0, axis.label, FONT_SIZE, EDGE_COLOR))
        elif side is Side.LEFT:
            x = strip.x1 - MAJOR_TICK - label_extent - line_height() + (line_height() - gh) / 2.0
            prims.append(Text(x, (content.y0 + content.y1) / 2.0 - w / 2.0, axis.label, FONT_SIZE, EDGE_COLOR, rotated=True))
        else:
            x = strip.x0 + MAJOR_TICK + label_extent + (line_height() - gh) / 2.0
            prims.append(Text(x, (content.y0 + content.y1) / 2.0 - w / 2.0, axis.label, FONT_SIZE, EDGE_COLOR, rotated=True))
    return prims


# --- annotations and decoration ---------------------------------------------------


def annotations_drawlist(node: PlotNode, content: Rect) -> list:
    px, py = primary_transforms(node)
    prims: list = [PushClip(content.x0, content.y0, content.x1, content.y1)]
    gh = font.glyph_box(FONT_SIZE)[1]
    for ann in node.annotations:
        if isinstance(ann, TextAnnotation):
            if ann.fraction:
                ax = content.x0 + ann.x * content.w
                ay = content.y1 - ann.y * content.h
            elif px is not None and py is not None:
                ax = _dev_x(px, ann.x, content)
                ay = _dev_y(py, ann.y, content)
            else:
                continue
            if not (math.isnan(ax) or math.isnan(ay)):
                # anchor is the bottom-left corner of the glyph box
                prims.append(Text(ax, ay - gh, ann.text, FONT_SIZE, ann.color))
        elif isinstance(ann, HLineAnnotation):
            if py is None:
                continue
            y = _dev_y(py, ann.y, content)
            if not math.isnan(y):
                dash = ann.style.dash if ann.style.line is LineKind.DASHED else None
                prims.append(Polyline(((float(content.x0), y), (float(content.x1), y)), ann.style.color, ann.style.stroke_width, dash))
        elif isinstance(ann, VLineAnnotation):
            if px is None:
                continue
            x = _dev_x(px, ann.x, content)
            if not math.isnan(x):
                dash = ann.style.dash if ann.style.line is LineKind.DASHED else None
                prims.append(Polyline(((x, float(content.y0)), (x, float(content.y1))), ann.style.color, ann.style.stroke_width, dash))
        elif isinstance(ann, RectAnnotation):
            if px is None or py is None:
                continue
            xs = sorted((_dev_x(px, ann.x0, content), _dev_x(px, ann.x1, content)))
            ys = sorted((_dev_y(py, ann.y0, content), _dev_y(py, ann.y1, content)))
            if any(math.isnan(v) for v in xs + ys):
                continue
            prims.append(FillRect(xs[0], ys[0], xs[1], ys[1], ann.fill))
            if ann.outline is not None:
                ring = ((xs[0], ys[0]), (xs[1], ys[0]), (xs[1], ys[1]), (xs[0], ys[1]), (xs[0], ys[0]))
                dash = ann.outline.dash if ann.outline.line is LineKind.DASHED else None
                prims.append(Polyline(ring, ann.outline.color, ann.outline.stroke_width, dash))
    prims.append(PopClip())
    return prims


def decoration_drawlist(node: PlotNode, band: Rect) -> list:
    gh = font.glyph_box(TITLE_SIZE)[1]
    w = text_width(node.title, TITLE_SIZE)
    x = (band.x0 + band.x1) / 2.0 - w / 2.0
    y = band.y0 + (band.h - gh) / 2.0
    return [Text(x, y, node.title, TITLE_SIZE, EDGE_COLOR)]


def component_drawlist(scene: PlotNode, gm: GeometryMap, cid: ComponentId) -> list:
    node = next(n for n in iter_nodes(scene) if n.id == cid[1])
    ng = gm.nodes[node.id]
    if cid[0] == "layer":
        layer = next(l for l in node.layers if l.id == cid[2])
        return layer_drawlist(node, layer, ng.content)
    if cid[0] == "axis":
        return axis_drawlist(node, cid[2], ng)
    if cid[0] == "annotations":
        return annotations_drawlist(node, ng.content)
    return decoration_drawlist(node, ng.title_band)
