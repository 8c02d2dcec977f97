"""Resolution-independent draw list: the single IR behind raster and EPS output.

Coordinates are device pixels (y down).  Both the rasterizer and the EPS
writer consume these primitives, which is what keeps the two output paths
geometrically identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Color


@dataclass(frozen=True)
class FillRect:
    x0: float
    y0: float
    x1: float
    y1: float
    color: Color


@dataclass(frozen=True)
class Polyline:
    """Open polyline stroked as ONE primitive: overlapping segment coverage is
    unioned, so joints never double-blend."""

    points: tuple[tuple[float, float], ...]
    color: Color
    width: float = 1.0
    dash: tuple[float, float] | None = None


@dataclass(frozen=True)
class FillPolygon:
    points: tuple[tuple[float, float], ...]
    color: Color


@dataclass(frozen=True)
class StrokeCircle:
    cx: float
    cy: float
    r: float
    color: Color
    width: float = 1.0


@dataclass(frozen=True)
class FillCircle:
    cx: float
    cy: float
    r: float
    color: Color


@dataclass(frozen=True)
class Text:
    """Bitmap text; (x, y) is the glyph box top-left.  rotated=True turns the
    whole string 90 degrees counterclockwise (vertical axis labels)."""

    x: float
    y: float
    text: str
    size: float
    color: Color
    rotated: bool = False


@dataclass(frozen=True)
class Image:
    """Pre-resampled device-space pixel block (uint8 RGB rows), drawn opaque
    and unfiltered at integer rect (x0, y0)..(x1, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int
    rgb: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class PushClip:
    x0: int
    y0: int
    x1: int
    y1: int


@dataclass(frozen=True)
class PopClip:
    pass


Primitive = FillRect | Polyline | FillPolygon | StrokeCircle | FillCircle | Text | Image | PushClip | PopClip
DrawList = list


def dash_segments(
    points: list[tuple[float, float]], on: float, off: float
) -> list[list[tuple[float, float]]]:
    """Split a polyline into ON runs of the dash pattern (phase 0 at the start).

    Shared by the rasterizer and the EPS interpreter so dashes land on the
    same pixels in both output paths.
    """
    runs: list[list[tuple[float, float]]] = []
    period = on + off
    dist = 0.0  # arc length consumed
    current: list[tuple[float, float]] = []

    def pen_down(d: float) -> bool:
        return (d % period) < on

    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        seg = math.hypot(x1 - x0, y1 - y0)
        if seg == 0.0:
            continue
        t = 0.0
        while t < seg:
            phase = (dist + t) % period
            if phase < on:
                run = min(on - phase, seg - t)
                ax = x0 + (x1 - x0) * (t / seg)
                ay = y0 + (y1 - y0) * (t / seg)
                bx = x0 + (x1 - x0) * ((t + run) / seg)
                by = y0 + (y1 - y0) * ((t + run) / seg)
                if current and current[-1] == (ax, ay):
                    current.append((bx, by))
                else:
                    if current:
                        runs.append(current)
                    current = [(ax, ay), (bx, by)]
                t += run
            else:
                t += period - phase
        dist += seg
    if current:
        runs.append(current)
    return [r for r in runs if len(r) >= 2]
