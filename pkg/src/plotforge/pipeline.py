"""Scene rendering: layout, per-component tiles, composition.

Tiles are premultiplied float64 rasters rendered over a transparent
background; the scene canvas starts opaque white, tiles are composited in
composition order, and the result is quantized exactly once.  Rendering the
concatenated draw lists onto a single canvas produces the identical image,
which is what makes the tile cache safe.
"""

from __future__ import annotations

import numpy as np

from .cache import RenderStats, TileCache
from .components import component_drawlist, tile_specs
from .draw import FillRect, PopClip, PushClip
from .layout import GeometryMap, layout
from .model import PlotNode
from .rasterize import Canvas, render_drawlist

WHITE = (255, 255, 255, 255)


def _component_prims(scene: PlotNode, gm: GeometryMap, spec) -> list:
    # the tile clip is part of the draw list so that one-canvas rendering and
    # EPS output clip exactly where tile boundaries would
    r = spec.rect
    return [PushClip(r.x0, r.y0, r.x1, r.y1), *component_drawlist(scene, gm, spec.cid), PopClip()]


def _render_tile(scene: PlotNode, gm: GeometryMap, spec) -> np.ndarray:
    prims = _component_prims(scene, gm, spec)
    return render_drawlist(prims, spec.rect.w, spec.rect.h, ox=spec.rect.x0, oy=spec.rect.y0)


def render_scene(
    scene: PlotNode,
    width: int,
    height: int,
    cache: TileCache | None = None,
    executor=None,
) -> tuple[np.ndarray, RenderStats]:
    """Render to an RGBA8 array of shape (height, width, 4).

    Returns the raster and the cache hit/miss accounting for this render.
    `executor` may be a concurrent.futures executor; tile renders are pure,
    so fanning misses out over threads cannot change the image.
    """
    gm = layout(scene, width, height)
    specs = tile_specs(scene, gm)
    stats = RenderStats()

    tiles: list[np.ndarray | None] = [cache.get(s.key) if cache else None for s in specs]
    pending = [i for i, t in enumerate(tiles) if t is None]
    if executor is not None and len(pending) > 1:
        futures = {i: executor.submit(_render_tile, scene, gm, specs[i]) for i in pending}
        for i, fut in futures.items():
            tiles[i] = fut.result()
    else:
        for i in pending:
            tiles[i] = _render_tile(scene, gm, specs[i])

    canvas = Canvas(width, height, background=WHITE)
    pending_set = set(pending)
    for i, spec in enumerate(specs):
        tile = tiles[i]
        if i in pending_set:
            stats.misses.append(spec.cid)
            if cache is not None:
                cache.put(spec.key, tile)
        else:
            stats.hits.append(spec.cid)
        canvas.composite(tile, spec.rect.x0, spec.rect.y0)
    return canvas.to_u8(), stats


def emit_drawlist(scene: PlotNode, width: int, height: int) -> list:
    """The full scene as one draw list: white background, then every
    component in composition order.  Both export paths consume this."""
    gm = layout(scene, width, height)
    prims: list = [FillRect(0.0, 0.0, float(width), float(height), WHITE)]
    for spec in tile_specs(scene, gm):
        prims.extend(_component_prims(scene, gm, spec))
    return prims
