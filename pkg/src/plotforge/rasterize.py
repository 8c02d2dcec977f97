"""Software rasterizer for draw lists.

Design constraints that shape everything here:
- coverage is quantized to the u8 grid at rasterization time, and
- canvases are premultiplied float64 with a single final quantization,
so a scene composited from cached per-component tiles is bit-identical to the
same scene rendered onto one canvas.  No display, no GPU, no system fonts.
"""

from __future__ import annotations

import math

import numpy as np

from . import font
from .draw import (
    FillCircle,
    FillPolygon,
    FillRect,
    Image,
    Polyline,
    PopClip,
    PushClip,
    StrokeCircle,
    Text,
    dash_segments,
)
from .model import Color


def _quantize(cov: np.ndarray) -> np.ndarray:
    return np.floor(cov * 255.0 + 0.5) / 255.0


class Canvas:
    """Premultiplied float64 RGBA raster over device rect [ox,ox+w) x [oy,oy+h)."""

    def __init__(self, width: int, height: int, ox: int = 0, oy: int = 0, background: Color | None = None):
        self.w, self.h, self.ox, self.oy = width, height, ox, oy
        self.pm = np.zeros((height, width, 4), dtype=np.float64)
        if background is not None:
            a = background[3] / 255.0
            self.pm[:, :] = [background[0] / 255.0 * a, background[1] / 255.0 * a, background[2] / 255.0 * a, a]
        self._clips: list[tuple[int, int, int, int]] = []

    # clip rects are integer device rects; the active clip is their intersection
    def push_clip(self, x0: int, y0: int, x1: int, y1: int) -> None:
        self._clips.append((x0, y0, x1, y1))

    def pop_clip(self) -> None:
        self._clips.pop()

    def _region(self, bx0: int, by0: int, bx1: int, by1: int):
        x0, y0 = max(bx0, self.ox), max(by0, self.oy)
        x1, y1 = min(bx1, self.ox + self.w), min(by1, self.oy + self.h)
        for cx0, cy0, cx1, cy1 in self._clips:
            x0, y0 = max(x0, cx0), max(y0, cy0)
            x1, y1 = min(x1, cx1), min(y1, cy1)
        if x1 <= x0 or y1 <= y0:
            return None
        return x0, y0, x1, y1

    def _blend(self, x0: int, y0: int, cov: np.ndarray, color: Color) -> None:
        """Blend quantized coverage (device rect origin x0,y0) with color."""
        region = self._region(x0, y0, x0 + cov.shape[1], y0 + cov.shape[0])
        if region is None:
            return
        rx0, ry0, rx1, ry1 = region
        sub = cov[ry0 - y0 : ry1 - y0, rx0 - x0 : rx1 - x0]
        a = color[3] / 255.0
        alpha = (a * sub)[..., None]
        src = np.array([color[0] / 255.0 * a, color[1] / 255.0 * a, color[2] / 255.0 * a, a])
        view = self.pm[ry0 - self.oy : ry1 - self.oy, rx0 - self.ox : rx1 - self.ox]
        view *= 1.0 - alpha
        view += src * (sub[..., None])

    # --- primitives ------------------------------------------------------------

    def fill_rect(self, p: FillRect) -> None:
        x0, y0, x1, y1 = min(p.x0, p.x1), min(p.y0, p.y1), max(p.x0, p.x1), max(p.y0, p.y1)
        bx0, by0 = math.floor(x0), math.floor(y0)
        bx1, by1 = math.ceil(x1), math.ceil(y1)
        if bx1 <= bx0 or by1 <= by0:
            return
        xs = np.arange(bx0, bx1)
        ys = np.arange(by0, by1)
        cov_x = np.clip(np.minimum(xs + 1.0, x1) - np.maximum(xs + 0.0, x0), 0.0, 1.0)
        cov_y = np.clip(np.minimum(ys + 1.0, y1) - np.maximum(ys + 0.0, y0), 0.0, 1.0)
        self._blend(bx0, by0, _quantize(np.outer(cov_y, cov_x)), p.color)

    def polyline(self, p: Polyline) -> None:
        runs = [list(p.points)]
        if p.dash is not None:
            runs = dash_segments(list(p.points), p.dash[0], p.dash[1])
        segs = []
        for run in runs:
            segs.extend(zip(run, run[1:]))
        if not segs:
            return
        half = p.width / 2.0
        pad = half + 1.0
        xs = [q[0] for s in segs for q in s]
        ys = [q[1] for s in segs for q in s]
        bx0, by0 = math.floor(min(xs) - pad), math.floor(min(ys) - pad)
        bx1, by1 = math.ceil(max(xs) + pad), math.ceil(max(ys) + pad)
        region = self._region(bx0, by0, bx1, by1)
        if region is None:
            return
        rx0, ry0, rx1, ry1 = region
        px, py = np.meshgrid(np.arange(rx0, rx1) + 0.5, np.arange(ry0, ry1) + 0.5)
        acc = np.zeros(px.shape, dtype=np.float64)
        for (ax, ay), (bx, by) in segs:
            dx, dy = bx - ax, by - ay
            L2 = dx * dx + dy * dy
            if L2 == 0.0:
                dist = np.hypot(px - ax, py - ay)
            else:
                t = np.clip(((px - ax) * dx + (py - ay) * dy) / L2, 0.0, 1.0)
                dist = np.hypot(px - (ax + t * dx), py - (ay + t * dy))
            np.maximum(acc, np.clip(half + 0.5 - dist, 0.0, 1.0), out=acc)
        self._blend(rx0, ry0, _quantize(acc), p.color)

    def fill_polygon(self, p: FillPolygon) -> None:
        pts = list(p.points)
        if len(pts) < 3:
            return
        xs = [q[0] for q in pts]
        ys = [q[1] for q in pts]
        bx0, by0 = math.floor(min(xs)), math.floor(min(ys))
        bx1, by1 = math.ceil(max(xs)), math.ceil(max(ys))
        region = self._region(bx0, by0, bx1, by1)
        if region is None:
            return
        rx0, ry0, rx1, ry1 = region
        # 4x4 supersampled even-odd coverage: deterministic and quantizes cleanly
        sub = (np.arange(4) + 0.5) / 4.0
        sx = (np.arange(rx0, rx1)[:, None] + sub[None, :]).reshape(-1)
        sy = (np.arange(ry0, ry1)[:, None] + sub[None, :]).reshape(-1)
        gx, gy = np.meshgrid(sx, sy)
        inside = np.zeros(gx.shape, dtype=bool)
        n = len(pts)
        for i in range(n):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % n]
            if y0 == y1:
                continue
            crosses = ((gy >= min(y0, y1)) & (gy < max(y0, y1)))
            t = (gy - y0) / (y1 - y0)
            inside ^= crosses & (gx < x0 + t * (x1 - x0))
        cov = inside.reshape(ry1 - ry0, 4, rx1 - rx0, 4).sum(axis=(1, 3)) / 16.0
        self._blend(rx0, ry0, _quantize(cov), p.color)

    def _center_dist(self, cx: float, cy: float, region) -> np.ndarray:
        rx0, ry0, rx1, ry1 = region
        px, py = np.meshgrid(np.arange(rx0, rx1) + 0.5, np.arange(ry0, ry1) + 0.5)
        return np.hypot(px - cx, py - cy)

    def fill_circle(self, p: FillCircle) -> None:
        pad = p.r + 1.0
        region = self._region(math.floor(p.cx - pad), math.floor(p.cy - pad), math.ceil(p.cx + pad), math.ceil(p.cy + pad))
        if region is None:
            return
        dist = self._center_dist(p.cx, p.cy, region)
        cov = np.clip(p.r + 0.5 - dist, 0.0, 1.0)
        self._blend(region[0], region[1], _quantize(cov), p.color)

    def stroke_circle(self, p: StrokeCircle) -> None:
        pad = p.r + p.width / 2.0 + 1.0
        region = self._region(math.floor(p.cx - pad), math.floor(p.cy - pad), math.ceil(p.cx + pad), math.ceil(p.cy + pad))
        if region is None:
            return
        dist = self._center_dist(p.cx, p.cy, region)
        cov = np.clip(p.width / 2.0 + 0.5 - np.abs(dist - p.r), 0.0, 1.0)
        self._blend(region[0], region[1], _quantize(cov), p.color)

    def text(self, p: Text) -> None:
        mask = font.text_mask(p.text, p.size)
        if p.rotated:
            mask = np.rot90(mask)
        x, y = int(round(p.x)), int(round(p.y))
        self._blend(x, y, mask.astype(np.float64), p.color)

    def image(self, p: Image) -> None:
        region = self._region(p.x0, p.y0, p.x1, p.y1)
        if region is None:
            return
        rx0, ry0, rx1, ry1 = region
        block = p.rgb[ry0 - p.y0 : ry1 - p.y0, rx0 - p.x0 : rx1 - p.x0].astype(np.float64) / 255.0
        view = self.pm[ry0 - self.oy : ry1 - self.oy, rx0 - self.ox : rx1 - self.ox]
        view[..., :3] = block
        view[..., 3] = 1.0

    def draw(self, prims: list) -> None:
        for p in prims:
            if isinstance(p, PushClip):
                self.push_clip(p.x0, p.y0, p.x1, p.y1)
            elif isinstance(p, PopClip):
                self.pop_clip()
            elif isinstance(p, FillRect):
                self.fill_rect(p)
            elif isinstance(p, Polyline):
                self.polyline(p)
            elif isinstance(p, FillPolygon):
                self.fill_polygon(p)
            elif isinstance(p, FillCircle):
                self.fill_circle(p)
            elif isinstance(p, StrokeCircle):
                self.stroke_circle(p)
            elif isinstance(p, Text):
                self.text(p)
            elif isinstance(p, Image):
                self.image(p)
            else:
                raise TypeError(f"unknown primitive {type(p).__name__}")

    def composite(self, tile: np.ndarray, ox: int, oy: int) -> None:
        """Source-over a premultiplied tile onto this canvas at device (ox, oy)."""
        th, tw = tile.shape[:2]
        region = self._region(ox, oy, ox + tw, oy + th)
        if region is None:
            return
        rx0, ry0, rx1, ry1 = region
        sub = tile[ry0 - oy : ry1 - oy, rx0 - ox : rx1 - ox]
        view = self.pm[ry0 - self.oy : ry1 - self.oy, rx0 - self.ox : rx1 - self.ox]
        view *= 1.0 - sub[..., 3:4]
        view += sub

    def to_u8(self) -> np.ndarray:
        """Final quantization.  Assumes an opaque backdrop (alpha is 1 everywhere),
        so premultiplied equals straight RGBA."""
        return np.floor(self.pm * 255.0 + 0.5).astype(np.uint8)


def render_drawlist(prims: list, width: int, height: int, ox: int = 0, oy: int = 0, background: Color | None = None) -> np.ndarray:
    canvas = Canvas(width, height, ox, oy, background)
    canvas.draw(prims)
    return canvas.pm
