"""Axis-transform math: data <-> normalized [0,1] mapping and zoom algebra.

All functions are pure; zoom operations return new Range values and never
touch the transform they were given.
"""

from __future__ import annotations

import math

from .errors import TransformError
from .model import AxisKind, AxisTransform, Range

# 1.25 per wheel notch: shallow enough to track, exact inverse exists
WHEEL_FACTOR = 1.25
# relative span floor below which a zoom is refused
SPAN_REL_MIN = 1e-12


def forward(tr: AxisTransform, x: float) -> float:
    """Map a data value to normalized t.  Out-of-range x gives t outside [0,1]."""
    lo, hi = tr.range.lo, tr.range.hi
    if tr.kind == AxisKind.LOG:
        if x <= 0:
            raise TransformError("LOG_NONPOSITIVE_VALUE", f"log-axis value must be positive, got {x}")
        t = (math.log10(x) - math.log10(lo)) / (math.log10(hi) - math.log10(lo))
    else:
        t = (x - lo) / (hi - lo)
    return 1.0 - t if tr.inverted else t


def inverse(tr: AxisTransform, t: float) -> float:
    if tr.inverted:
        t = 1.0 - t
    lo, hi = tr.range.lo, tr.range.hi
    if tr.kind == AxisKind.LOG:
        llo, lhi = math.log10(lo), math.log10(hi)
        return 10.0 ** (llo + t * (lhi - llo))
    return lo + t * (hi - lo)


def _uninverted(tr: AxisTransform) -> AxisTransform:
    if not tr.inverted:
        return tr
    return AxisTransform(id=tr.id, kind=tr.kind, range=tr.range, inverted=False, sexa_mode=tr.sexa_mode)


def _guarded_range(lo: float, hi: float) -> Range:
    if not (hi > lo) or (hi - lo) < SPAN_REL_MIN * max(abs(lo), abs(hi)):
        raise TransformError("SPAN_TOO_SMALL", f"zoomed span [{lo}, {hi}] is numerically degenerate")
    return Range(lo, hi)


def zoom_to_fraction(tr: AxisTransform, f0: float, f1: float) -> Range:
    """New range covering [f0,f1] of the current normalized span.

    Fractions are in un-inverted normalized space (callers undo inversion
    before computing them from device coordinates).
    """
    if not (0.0 <= f0 < f1 <= 1.0):
        raise TransformError("BAD_FRACTION", f"need 0 <= f0 < f1 <= 1, got [{f0}, {f1}]")
    base = _uninverted(tr)
    return _guarded_range(inverse(base, f0), inverse(base, f1))


def wheel_zoom(tr: AxisTransform, anchor_fraction: float, notches: int) -> Range:
    """Scale the span by WHEEL_FACTOR^-notches keeping the anchor fixed."""
    if not (0.0 <= anchor_fraction <= 1.0):
        raise TransformError("BAD_FRACTION", f"anchor fraction must be in [0,1], got {anchor_fraction}")
    if notches == 0:
        return tr.range
    a = anchor_fraction
    scale = WHEEL_FACTOR ** notches
    f0 = a - a / scale
    f1 = a + (1.0 - a) / scale
    base = _uninverted(tr)
    return _guarded_range(inverse(base, f0), inverse(base, f1))
