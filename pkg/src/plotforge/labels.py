"""Tick label text generation for the four axis kinds.

Numeric labels use the fewest fixed decimals that keep adjacent majors
distinct.  Date labels follow a step-granularity ladder; time-of-day forms
gain a date prefix when the ticks cross a UTC day so label sets stay
pairwise distinct.  Sexagesimal labels truncate at the step's coarsest
nonzero component.
"""

from __future__ import annotations

import math
from datetime import datetime, timedelta, timezone

from .errors import FormatError

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

DEGREE = "°"
PRIME = "′"
DOUBLE_PRIME = "″"


def from_epoch(t: float) -> datetime:
    return EPOCH + timedelta(seconds=t)


def to_epoch(dt: datetime) -> float:
    return (dt - EPOCH).total_seconds()


def _fixed(value: float, decimals: int) -> str:
    if value == 0.0:
        value = 0.0  # kill -0.0
    return f"{value:.{decimals}f}"


def linear_labels(values: list[float]) -> list[str]:
    """Shortest fixed-point labels that are pairwise distinct."""
    if not values:
        return []
    for decimals in range(0, 18):
        out = [_fixed(v, decimals) for v in values]
        if len(set(out)) == len(values):
            return out
    return [repr(v) for v in values]


def log_decade_label(k: int) -> str:
    if -1 <= k <= 2:
        return _fixed(10.0 ** k, 1 if k == -1 else 0)
    return f"10^{k}"


# --- dates --------------------------------------------------------------------

# granularity classes, coarsest nonzero unit of the chosen step
SEC, MIN, DAY, MONTH, YEAR = "sec", "min", "day", "month", "year"


def date_label(t: float, granularity: str, with_date_prefix: bool = False) -> str:
    dt = from_epoch(round(t))
    if granularity == YEAR:
        return f"{dt.year:04d}"
    if granularity == MONTH:
        return f"{dt.year:04d}-{dt.month:02d}"
    if granularity == DAY:
        return f"{dt.year:04d}-{dt.month:02d}-{dt.day:02d}"
    clock = f"{dt.hour:02d}:{dt.minute:02d}"
    if granularity == SEC:
        clock += f":{dt.second:02d}"
    if with_date_prefix:
        return f"{dt.year:04d}-{dt.month:02d}-{dt.day:02d} {clock}"
    return clock


def date_labels(ts: list[float], granularity: str) -> list[str]:
    prefix = False
    if granularity in (SEC, MIN) and ts:
        d0, d1 = from_epoch(round(ts[0])), from_epoch(round(ts[-1]))
        prefix = (d0.year, d0.month, d0.day) != (d1.year, d1.month, d1.day)
    return [date_label(t, granularity, prefix) for t in ts]


# --- sexagesimal --------------------------------------------------------------

# granularity: "deg" | "min" | "sec" (units of the mode: degrees for DMS,
# hours for HMS)


def _split_sexa(units: float) -> tuple[str, int, int, float]:
    sign = "-" if units < 0 else "+"
    total = abs(units) * 3600.0
    total = round(total, 4)  # ladder steps are >= 0.1 of a second unit
    whole = int(total // 3600)
    rem = total - whole * 3600
    minutes = int(rem // 60)
    seconds = rem - minutes * 60
    if round(seconds, 1) >= 60.0:  # carry after rounding
        seconds = 0.0
        minutes += 1
    if minutes >= 60:
        minutes = 0
        whole += 1
    return sign, whole, minutes, seconds


def _seconds_text(seconds: float) -> str:
    if abs(seconds - round(seconds)) < 1e-6:
        return f"{int(round(seconds)):02d}"
    return f"{seconds:04.1f}"


def dms_label(degrees: float, granularity: str) -> str:
    sign, d, m, s = _split_sexa(degrees)
    if granularity == "deg":
        return f"{sign}{d:02d}{DEGREE}"
    if granularity == "min":
        return f"{sign}{d:02d}{DEGREE}{m:02d}{PRIME}"
    return f"{sign}{d:02d}{DEGREE}{m:02d}{PRIME}{_seconds_text(s)}{DOUBLE_PRIME}"


def hms_label(degrees: float, granularity: str) -> str:
    hours = degrees / 15.0
    sign, h, m, s = _split_sexa(hours)
    prefix = "-" if sign == "-" else ""
    if granularity == "deg":
        return f"{prefix}{h:02d}h"
    if granularity == "min":
        return f"{prefix}{h:02d}h{m:02d}m"
    return f"{prefix}{h:02d}h{m:02d}m{_seconds_text(s)}s"


def readout_text(kind, sexa_mode, value: float) -> str:
    """One coordinate for a status-bar readout, in the axis family's notation."""
    from .model import AxisKind, SexaMode

    if kind is AxisKind.DATE:
        return from_epoch(round(value)).strftime("%Y-%m-%d %H:%M:%S")
    if kind is AxisKind.SEXAGESIMAL:
        if sexa_mode is SexaMode.HMS:
            return hms_label(value, "sec")
        return dms_label(value, "sec")
    return f"{value:.6g}"


# --- override patterns --------------------------------------------------------


def apply_pattern(value: float, pattern: str, is_date: bool) -> str:
    """User-supplied format override: strftime when it contains %, otherwise a
    format-spec for the numeric value."""
    try:
        if "%" in pattern:
            if not is_date:
                raise ValueError("strftime pattern on a non-date axis")
            return from_epoch(round(value)).strftime(pattern)
        return format(value, pattern)
    except (ValueError, OverflowError) as exc:
        raise FormatError("BAD_PATTERN", f"cannot format with pattern '{pattern}': {exc}") from None
