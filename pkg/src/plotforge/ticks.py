"""Tick generation for linear, log, date, and sexagesimal axes.

Step selection everywhere minimizes |count - target| over a candidate ladder,
breaking ties toward the smaller step.  Containment tolerance is 1e-9 of the
range span; majors sit at exact multiples of the chosen step (calendar
boundaries for dates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime

from . import labels as fmt
from .model import AxisKind, AxisTransform, Range, SexaMode, TickConfig

CONTAIN_TOL = 1e-9


@dataclass(frozen=True)
class TickSet:
    major: tuple[tuple[float, str], ...]  # (value, label)
    minor: tuple[float, ...]

    @property
    def positions(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.major)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s for _, s in self.major)


# --- linear -------------------------------------------------------------------

# minors per major interval by leading step digit (unless overridden)
_SUBDIVISIONS = {1: 5, 2: 4, 5: 5}


def _multiples(lo: float, hi: float, step: float, tol: float) -> tuple[int, int]:
    m0 = math.ceil((lo - tol) / step)
    m1 = math.floor((hi + tol) / step)
    return m0, m1


def _pick_step(rng: Range, target: int, ladder) -> tuple[float, object]:
    """ladder yields (step_value, payload); returns the winning entry."""
    tol = CONTAIN_TOL * rng.span
    best = None
    for pos, (step, payload) in enumerate(ladder):
        m0, m1 = _multiples(rng.lo, rng.hi, step, tol)
        count = max(0, m1 - m0 + 1)
        key = (abs(count - target), pos)
        if best is None or key < best[0]:
            best = (key, step, payload)
    return best[1], best[2]


def _linear_ladder(span: float, target: int):
    k_lo = math.floor(math.log10(span / max(target, 2))) - 2
    k_hi = math.floor(math.log10(span)) + 1
    for k in range(k_lo, k_hi + 1):
        for s in (1, 2, 5):
            yield s * (10.0 ** k), s


def linear_ticks(rng: Range, target: int, minor_count: int | None = None) -> TickSet:
    tol = CONTAIN_TOL * rng.span
    step, lead = _pick_step(rng, target, _linear_ladder(rng.span, target))
    m0, m1 = _multiples(rng.lo, rng.hi, step, tol)
    values = [m * step for m in range(m0, m1 + 1)]
    texts = fmt.linear_labels(values)
    minors = _multiple_minors(rng, step, _divisions(lead, minor_count))
    return TickSet(tuple(zip(values, texts)), tuple(minors))


def _divisions(lead: int, minor_count: int | None) -> int:
    if minor_count is not None:
        return minor_count + 1
    return _SUBDIVISIONS[lead]


def _multiple_minors(rng: Range, step: float, divisions: int) -> list[float]:
    # minor positions are multiples of step/divisions, skipping major indices,
    # so partial intervals at the range edges get their share too
    if divisions < 2:
        return []
    tol = CONTAIN_TOL * rng.span
    ms = step / divisions
    j0, j1 = _multiples(rng.lo, rng.hi, ms, tol)
    return [j * ms for j in range(j0, j1 + 1) if j % divisions != 0]


# --- log ----------------------------------------------------------------------


def log_ticks(rng: Range, target: int, minor_count: int | None = None) -> TickSet:
    llo, lhi = math.log10(rng.lo), math.log10(rng.hi)
    span_dec = lhi - llo
    if span_dec < 1.0 - 1e-12:
        return linear_ticks(rng, target, minor_count)
    tol_dec = CONTAIN_TOL * span_dec
    k0 = math.ceil(llo - tol_dec)
    k1 = math.floor(lhi + tol_dec)

    def decade_count(m: int) -> int:
        a = math.ceil(k0 / m)
        b = math.floor(k1 / m)
        return max(0, b - a + 1)

    thin = 1
    while decade_count(thin) > 1.5 * target:
        thin += 1
    ks = [k for k in range(k0, k1 + 1) if k % thin == 0]
    majors = tuple((10.0 ** k, fmt.log_decade_label(k)) for k in ks)

    minors: list[float] = []
    if minor_count is not None:
        minors = _interval_minors([v for v, _ in majors], minor_count)
    elif span_dec <= 3.0 + tol_dec:
        tol = CONTAIN_TOL * rng.span
        for k in range(math.floor(llo) - 1, k1 + 1):
            for j in range(2, 10):
                v = j * (10.0 ** k)
                if rng.lo - tol <= v <= rng.hi + tol:
                    minors.append(v)
    return TickSet(majors, tuple(minors))


def _interval_minors(majors: list[float], minor_count: int) -> list[float]:
    out = []
    for a, b in zip(majors, majors[1:]):
        for j in range(1, minor_count + 1):
            out.append(a + (b - a) * j / (minor_count + 1))
    return out


# --- date ---------------------------------------------------------------------

_WEEK_ANCHOR = -259200.0  # 1969-12-29, the ISO Monday before the epoch

# (nominal seconds for ordering, kind, parameter)
_DATE_UNIFORM = [
    (s, "uniform", (float(s), 0.0))
    for s in (1, 5, 15, 30, 60, 300, 900, 1800, 3600, 10800, 21600, 43200, 86400)
] + [(604800, "uniform", (604800.0, _WEEK_ANCHOR))]
_DATE_MONTHS = [(2629746 * n, "month", n) for n in (1, 3, 6)]


def _date_ladder(span_seconds: float):
    for entry in _DATE_UNIFORM:
        yield entry
    for entry in _DATE_MONTHS:
        yield entry
    span_years = span_seconds / 31557600.0
    k = 0
    while True:
        for s in (1, 2, 5):
            years = s * 10 ** k
            yield (31557600 * years, "year", years)
            if years > span_years:
                return
        k += 1


def _month_start(index: int) -> float:
    return fmt.to_epoch(datetime(index // 12, index % 12 + 1, 1, tzinfo=fmt.EPOCH.tzinfo))


def _year_start(year: int) -> float:
    return fmt.to_epoch(datetime(year, 1, 1, tzinfo=fmt.EPOCH.tzinfo))


def _first_calendar_index(t: float, step: int, month: bool) -> int:
    """Smallest boundary index >= t, rounded up to a multiple of step."""
    dt = fmt.from_epoch(t)
    if month:
        idx = dt.year * 12 + (dt.month - 1)
        if _month_start(idx) < t:
            idx += 1
    else:
        idx = dt.year
        if _year_start(idx) < t:
            idx += 1
    return idx + (-idx % step)


def _last_calendar_index(t: float, step: int, month: bool) -> int:
    dt = fmt.from_epoch(t)
    idx = dt.year * 12 + (dt.month - 1) if month else dt.year
    return idx - (idx % step)


def _calendar_positions(rng: Range, step: int, month: bool, count_only: bool):
    tol = CONTAIN_TOL * rng.span
    try:
        i0 = _first_calendar_index(rng.lo - tol, step, month)
        i1 = _last_calendar_index(rng.hi + tol, step, month)
    except (ValueError, OverflowError):
        return 0 if count_only else []
    if i1 < i0:
        return 0 if count_only else []
    count = (i1 - i0) // step + 1
    if count_only:
        return count
    make = _month_start if month else _year_start
    return [make(i) for i in range(i0, i1 + 1, step)]


def date_ticks(rng: Range, target: int, minor_count: int | None = None) -> TickSet:
    tol = CONTAIN_TOL * rng.span
    best = None
    for pos, (nominal, kind, param) in enumerate(_date_ladder(rng.span)):
        if kind == "uniform":
            step, anchor = param
            m0 = math.ceil((rng.lo - anchor - tol) / step)
            m1 = math.floor((rng.hi - anchor + tol) / step)
            count = max(0, m1 - m0 + 1)
        else:
            count = _calendar_positions(rng, param, kind == "month", count_only=True)
        key = (abs(count - target), pos)
        if best is None or key < best[0]:
            best = (key, kind, param)
    _, kind, param = best

    if kind == "uniform":
        step, anchor = param
        m0 = math.ceil((rng.lo - anchor - tol) / step)
        m1 = math.floor((rng.hi - anchor + tol) / step)
        values = [anchor + m * step for m in range(m0, m1 + 1)]
        granularity = fmt.SEC if step < 60 else fmt.MIN if step < 86400 else fmt.DAY
    else:
        values = _calendar_positions(rng, param, kind == "month", count_only=False)
        granularity = fmt.MONTH if kind == "month" else fmt.YEAR
    texts = fmt.date_labels(values, granularity)
    minors = _interval_minors(values, minor_count) if minor_count else []
    return TickSet(tuple(zip(values, texts)), tuple(minors))


# --- sexagesimal --------------------------------------------------------------

_ARC_STEPS = (1, 2, 5, 10, 15, 20, 30)


def _sexa_ladder(span_deg: float, mode: SexaMode):
    # unit sizes in degrees: (second, minute, whole) per mode
    if mode == SexaMode.DMS:
        second, minute, whole = 1.0 / 3600.0, 1.0 / 60.0, 1.0
    else:
        second, minute, whole = 15.0 / 3600.0, 15.0 / 60.0, 15.0
    for a in _ARC_STEPS:
        yield a * second, "sec"
    for a in _ARC_STEPS:
        yield a * minute, "min"
    k = 0
    while True:
        for s in (1, 2, 5):
            step = s * 10 ** k * whole
            yield step, "deg"
            if step > span_deg:
                return
        k += 1


def sexagesimal_ticks(
    rng: Range, target: int, mode: SexaMode, minor_count: int | None = None
) -> TickSet:
    tol = CONTAIN_TOL * rng.span
    step, granularity = _pick_step(rng, target, _sexa_ladder(rng.span, mode))
    m0, m1 = _multiples(rng.lo, rng.hi, step, tol)
    values = [m * step for m in range(m0, m1 + 1)]
    label = fmt.dms_label if mode == SexaMode.DMS else fmt.hms_label
    majors = tuple((v, label(v, granularity)) for v in values)
    minors = _interval_minors(values, minor_count) if minor_count else []
    return TickSet(majors, tuple(minors))


# --- dispatch -----------------------------------------------------------------


def _infer_date_granularity(spacing: float) -> str:
    if spacing < 60:
        return fmt.SEC
    if spacing < 86400:
        return fmt.MIN
    if spacing < 2629746:
        return fmt.DAY
    if spacing < 31557600:
        return fmt.MONTH
    return fmt.YEAR


def _explicit_ticks(tr: AxisTransform, cfg: TickConfig) -> TickSet:
    tol = CONTAIN_TOL * tr.range.span
    keep = [
        (i, p)
        for i, p in enumerate(cfg.positions)
        if tr.range.lo - tol <= p <= tr.range.hi + tol
    ]
    values = [p for _, p in keep]
    if cfg.labels is not None:
        texts = [cfg.labels[i] for i, _ in keep]
    elif cfg.label_format is not None:
        texts = [fmt.apply_pattern(v, cfg.label_format, tr.kind == AxisKind.DATE) for v in values]
    else:
        texts = _auto_labels(tr, values)
    minors = _interval_minors(values, cfg.minor_count) if cfg.minor_count else []
    return TickSet(tuple(zip(values, texts)), tuple(minors))


def _auto_labels(tr: AxisTransform, values: list[float]) -> list[str]:
    if not values:
        return []
    spacing = min((b - a for a, b in zip(values, values[1:])), default=abs(values[0]) or 1.0)
    if tr.kind == AxisKind.DATE:
        return fmt.date_labels(values, _infer_date_granularity(spacing))
    if tr.kind == AxisKind.SEXAGESIMAL:
        minute = 1.0 / 60.0 if tr.sexa_mode == SexaMode.DMS else 0.25
        whole = 1.0 if tr.sexa_mode == SexaMode.DMS else 15.0
        granularity = "sec" if spacing < minute else "min" if spacing < whole else "deg"
        label = fmt.dms_label if tr.sexa_mode == SexaMode.DMS else fmt.hms_label
        return [label(v, granularity) for v in values]
    if tr.kind == AxisKind.LOG and all(
        abs(v - 10.0 ** round(math.log10(v))) <= 1e-9 * v for v in values if v > 0
    ) and all(v > 0 for v in values):
        return [fmt.log_decade_label(round(math.log10(v))) for v in values]
    return fmt.linear_labels(values)


def generate_ticks(tr: AxisTransform, cfg: TickConfig) -> TickSet:
    """Entry point used by layout and rendering."""
    if cfg.positions is not None:
        return _explicit_ticks(tr, cfg)
    if tr.kind == AxisKind.LINEAR:
        ticks = linear_ticks(tr.range, cfg.target_count, cfg.minor_count)
    elif tr.kind == AxisKind.LOG:
        ticks = log_ticks(tr.range, cfg.target_count, cfg.minor_count)
    elif tr.kind == AxisKind.DATE:
        ticks = date_ticks(tr.range, cfg.target_count, cfg.minor_count)
    else:
        ticks = sexagesimal_ticks(tr.range, cfg.target_count, tr.sexa_mode, cfg.minor_count)
    if cfg.label_format is not None:
        majors = tuple(
            (v, fmt.apply_pattern(v, cfg.label_format, tr.kind == AxisKind.DATE))
            for v, _ in ticks.major
        )
        ticks = TickSet(majors, ticks.minor)
    return ticks
