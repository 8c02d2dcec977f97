"""Scene data model: nested plot nodes, axis transforms, layers, graphs, styles.

Everything here is immutable (frozen dataclasses, tuples for sequences).  A
scene is a tree of ``PlotNode``; mutation happens by building a new snapshot
(see :mod:`plotforge.paths`), which is what makes concurrent rendering safe
without locks.

Numeric data arrays are stored as flat tuples of floats so snapshots hash and
serialize deterministically; the renderer converts to numpy on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum

from .errors import SceneError


class AxisKind(Enum):
    LINEAR = "linear"
    LOG = "log"
    DATE = "date"
    SEXAGESIMAL = "sexagesimal"


class SexaMode(Enum):
    HMS = "hms"
    DMS = "dms"


class Side(Enum):
    BOTTOM = "bottom"
    TOP = "top"
    LEFT = "left"
    RIGHT = "right"

    @property
    def horizontal(self) -> bool:
        return self in (Side.BOTTOM, Side.TOP)


class ChartKind(Enum):
    NORMAL = "normal"
    HISTOGRAM = "histogram"


class LineKind(Enum):
    SOLID = "solid"
    DASHED = "dashed"
    NONE = "none"


class SymbolKind(Enum):
    NONE = "none"
    CIRCLE = "circle"
    SQUARE = "square"
    CROSS = "cross"
    TRIANGLE = "triangle"
    DOT = "dot"


class RampKind(Enum):
    GRAY = "gray"
    HEAT = "heat"


class GridNorm(Enum):
    LINEAR_MINMAX = "minmax"
    EXPLICIT = "explicit"


Color = tuple[int, int, int, int]

BLACK: Color = (0, 0, 0, 255)


@dataclass(frozen=True)
class Range:
    """Closed data interval.  ``lo < hi`` always; direction lives on the transform."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise SceneError("INVALID_RANGE", f"range endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise SceneError("INVALID_RANGE", f"range must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def span(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class AxisTransform:
    """1D mapping from a data range onto normalized [0, 1]; the unit of zooming."""

    id: str
    kind: AxisKind = AxisKind.LINEAR
    range: Range = field(default_factory=lambda: Range(0.0, 1.0))
    inverted: bool = False
    sexa_mode: SexaMode = SexaMode.HMS

    def __post_init__(self):
        if self.kind is AxisKind.LOG and self.range.lo <= 0:
            raise SceneError(
                "LOG_NONPOSITIVE",
                f"log transform '{self.id}' requires a positive range, got [{self.range.lo}, {self.range.hi}]",
            )


@dataclass(frozen=True)
class TickConfig:
    """Major/minor tick policy for one axis.

    ``positions`` (with optional paired ``labels``) overrides automatic
    placement; ``minor_count`` of None means the per-kind automatic rule.
    """

    target_count: int = 5
    positions: tuple[float, ...] | None = None
    labels: tuple[str, ...] | None = None
    minor_count: int | None = None
    label_format: str | None = None
    labels_visible: bool = True

    def __post_init__(self):
        if self.target_count < 2:
            raise SceneError("INVALID_RANGE", f"tick target_count must be >= 2, got {self.target_count}")
        if self.minor_count is not None and self.minor_count < 0:
            raise SceneError("INVALID_RANGE", f"minor_count must be >= 0, got {self.minor_count}")
        if self.labels is not None:
            if self.positions is None:
                raise SceneError("ARRAY_MISMATCH", "explicit tick labels require explicit positions")
            if len(self.labels) != len(self.positions):
                raise SceneError(
                    "ARRAY_MISMATCH",
                    f"{len(self.labels)} tick labels paired with {len(self.positions)} positions",
                )
        if self.positions is not None:
            pos = tuple(float(p) for p in self.positions)
            if any(pos[i] >= pos[i + 1] for i in range(len(pos) - 1)):
                raise SceneError("INVALID_RANGE", "explicit tick positions must be strictly increasing")
            object.__setattr__(self, "positions", pos)


@dataclass(frozen=True)
class Axis:
    """One edge of the drawing box, visualizing a transform."""

    side: Side
    transform: str
    visible: bool = True
    ticks: TickConfig = field(default_factory=TickConfig)
    label: str = ""
    grid_lines: bool = False
    outward: bool = False


@dataclass(frozen=True)
class Style:
    chart: ChartKind = ChartKind.NORMAL
    line: LineKind = LineKind.SOLID
    dash: tuple[float, float] = (4.0, 4.0)
    symbol: SymbolKind = SymbolKind.NONE
    symbol_size: float = 6.0
    color: Color = BLACK
    stroke_width: float = 1.0

    def __post_init__(self):
        if self.line is LineKind.NONE and self.symbol is SymbolKind.NONE:
            raise SceneError("INVALID_STYLE", "style draws nothing: line NONE requires a symbol")
        _check_color(self.color)
        if self.stroke_width <= 0:
            raise SceneError("INVALID_STYLE", f"stroke_width must be positive, got {self.stroke_width}")
        if self.dash[0] <= 0 or self.dash[1] <= 0:
            raise SceneError("INVALID_STYLE", f"dash lengths must be positive, got {self.dash}")


def _check_color(c) -> None:
    if (
        not isinstance(c, tuple)
        or len(c) != 4
        or not all(isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= 255 for v in c)
    ):
        raise SceneError("INVALID_STYLE", f"color must be 4 ints in 0..255, got {c!r}")


def _as_floats(values, what: str) -> tuple[float, ...]:
    try:
        out = tuple(float("nan") if v is None else float(v) for v in values)
    except (TypeError, ValueError):
        raise SceneError("ARRAY_MISMATCH", f"{what} must be a sequence of numbers") from None
    # NaN marks a gap; infinities have no finite device mapping
    if any(math.isinf(v) for v in out):
        raise SceneError("ARRAY_MISMATCH", f"{what} values must be finite or NaN")
    return out


def _as_grid(values, what: str) -> tuple[tuple[float, ...], ...]:
    rows = tuple(_as_floats(row, what) for row in values)
    if not rows or not rows[0]:
        raise SceneError("ARRAY_MISMATCH", f"{what} must be a non-empty 2D array")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SceneError("ARRAY_MISMATCH", f"{what} rows have unequal lengths")
    return rows


@dataclass(frozen=True)
class XYGraph:
    """Plain (x, y) dataset."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    style: Style = field(default_factory=Style)

    def __post_init__(self):
        object.__setattr__(self, "x", _as_floats(self.x, "x"))
        object.__setattr__(self, "y", _as_floats(self.y, "y"))
        if len(self.x) != len(self.y):
            raise SceneError("ARRAY_MISMATCH", f"x has {len(self.x)} samples but y has {len(self.y)}")


def _check_err(err, n: int, name: str):
    if err is None:
        return None
    vals = _as_floats(err, name)
    if len(vals) != n:
        raise SceneError("ARRAY_MISMATCH", f"{name} has {len(vals)} entries for {n} samples")
    if any(v < 0 for v in vals if not math.isnan(v)):
        raise SceneError("ARRAY_MISMATCH", f"{name} must be nonnegative")
    return vals


@dataclass(frozen=True)
class XYErrorGraph:
    """(x, y) dataset with asymmetric error bars; any error side may be absent."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    x_err_lo: tuple[float, ...] | None = None
    x_err_hi: tuple[float, ...] | None = None
    y_err_lo: tuple[float, ...] | None = None
    y_err_hi: tuple[float, ...] | None = None
    style: Style = field(default_factory=Style)

    def __post_init__(self):
        object.__setattr__(self, "x", _as_floats(self.x, "x"))
        object.__setattr__(self, "y", _as_floats(self.y, "y"))
        if len(self.x) != len(self.y):
            raise SceneError("ARRAY_MISMATCH", f"x has {len(self.x)} samples but y has {len(self.y)}")
        n = len(self.x)
        for name in ("x_err_lo", "x_err_hi", "y_err_lo", "y_err_hi"):
            object.__setattr__(self, name, _check_err(getattr(self, name), n, name))


@dataclass(frozen=True)
class GridGraph:
    """2D scalar field (intensity map) colored through a ramp."""

    values: tuple[tuple[float, ...], ...]
    x_extent: Range
    y_extent: Range
    ramp: RampKind = RampKind.GRAY
    norm: GridNorm = GridNorm.LINEAR_MINMAX
    norm_range: Range | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_grid(self.values, "values"))
        if self.norm is GridNorm.EXPLICIT and self.norm_range is None:
            raise SceneError("INVALID_RANGE", "explicit grid norm requires norm_range")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.values), len(self.values[0]))


@dataclass(frozen=True)
class RgbGraph:
    """Three-plane color image; all planes in [0, 1] with identical shape."""

    r: tuple[tuple[float, ...], ...]
    g: tuple[tuple[float, ...], ...]
    b: tuple[tuple[float, ...], ...]
    x_extent: Range
    y_extent: Range

    def __post_init__(self):
        for name in ("r", "g", "b"):
            object.__setattr__(self, name, _as_grid(getattr(self, name), name))
        shape = (len(self.r), len(self.r[0]))
        for name in ("g", "b"):
            plane = getattr(self, name)
            if (len(plane), len(plane[0])) != shape:
                raise SceneError("ARRAY_MISMATCH", f"rgb plane '{name}' shape differs from 'r'")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.r), len(self.r[0]))


Graph = XYGraph | XYErrorGraph | GridGraph | RgbGraph


@dataclass(frozen=True)
class Layer:
    """Z-ordered container binding one x and one y transform to graphs."""

    id: str
    x_transform: str
    y_transform: str
    graphs: tuple[Graph, ...] = ()
    visible: bool = True
    z_order: int = 0


@dataclass(frozen=True)
class TextAnnotation:
    x: float
    y: float
    text: str
    color: Color = BLACK
    fraction: bool = False  # True: (x, y) are drawing-box fractions, not data coords

    def __post_init__(self):
        _check_color(self.color)


@dataclass(frozen=True)
class HLineAnnotation:
    y: float
    style: Style = field(default_factory=Style)


@dataclass(frozen=True)
class VLineAnnotation:
    x: float
    style: Style = field(default_factory=Style)


@dataclass(frozen=True)
class RectAnnotation:
    """Filled data-space rectangle; corners are normalized so x0 < x1, y0 < y1."""

    x0: float
    x1: float
    y0: float
    y1: float
    fill: Color = (200, 200, 200, 255)
    outline: Style | None = None

    def __post_init__(self):
        if self.x0 > self.x1:
            object.__setattr__(self, "x0", self.x1), object.__setattr__(self, "x1", self.x0)
        if self.y0 > self.y1:
            object.__setattr__(self, "y0", self.y1), object.__setattr__(self, "y1", self.y0)
        if self.x0 == self.x1 or self.y0 == self.y1:
            raise SceneError("INVALID_RANGE", "rect annotation must have positive area")
        _check_color(self.fill)


Annotation = TextAnnotation | HLineAnnotation | VLineAnnotation | RectAnnotation


@dataclass(frozen=True)
class LayoutHints:
    cell: tuple[int, int] = (0, 0)
    weight: float = 1.0

    def __post_init__(self):
        if self.weight <= 0:
            raise SceneError("INVALID_RANGE", f"layout weight must be positive, got {self.weight}")
        if self.cell[0] < 0 or self.cell[1] < 0:
            raise SceneError("INVALID_RANGE", f"layout cell indices must be >= 0, got {self.cell}")


@dataclass(frozen=True)
class Margins:
    left: float = 0.0
    right: float = 0.0
    top: float = 0.0
    bottom: float = 0.0


@dataclass(frozen=True)
class PlotNode:
    """Recursive plot: owns transforms, axes, layers, annotations and child plots."""

    id: str
    title: str | None = None
    transforms: tuple[AxisTransform, ...] = ()
    axes: tuple[Axis, ...] = ()
    layers: tuple[Layer, ...] = ()
    annotations: tuple[Annotation, ...] = ()
    children: tuple[PlotNode, ...] = ()
    layout_hints: LayoutHints = field(default_factory=LayoutHints)
    margins: Margins | None = None


def iter_nodes(root: PlotNode):
    """Depth-first preorder over the tree; the canonical node enumeration."""
    yield root
    for child in root.children:
        yield from iter_nodes(child)


def find_transform(node: PlotNode, ref: str, where: str) -> AxisTransform:
    for tr in node.transforms:
        if tr.id == ref:
            return tr
    raise SceneError("UNRESOLVED_REF", f"transform '{ref}' not declared on node '{node.id}'", path=where)


def validate_scene(root: PlotNode) -> None:
    """Check all cross-reference and uniqueness invariants of a scene tree.

    Field-local invariants (ranges, array lengths, styles) are enforced by the
    dataclass constructors; this covers everything that needs tree context.
    """
    seen_ids: set[str] = set()
    seen_nodes: set[int] = set()
    for node in iter_nodes(root):
        if id(node) in seen_nodes:
            raise SceneError("INVALID_RANGE", f"node '{node.id}' appears twice in the tree")
        seen_nodes.add(id(node))
        if node.id in seen_ids:
            raise SceneError("UNRESOLVED_REF", f"duplicate node id '{node.id}'")
        seen_ids.add(node.id)
        _validate_node(node)


def _validate_node(node: PlotNode) -> None:
    tr_ids = [t.id for t in node.transforms]
    if len(set(tr_ids)) != len(tr_ids):
        raise SceneError("UNRESOLVED_REF", f"duplicate transform id on node '{node.id}'")
    layer_ids = [l.id for l in node.layers]
    if len(set(layer_ids)) != len(layer_ids):
        raise SceneError("UNRESOLVED_REF", f"duplicate layer id on node '{node.id}'")

    x_refs: set[str] = set()
    y_refs: set[str] = set()
    for i, layer in enumerate(node.layers):
        where = f"layers[{i}]"
        find_transform(node, layer.x_transform, f"{where}.x_transform")
        find_transform(node, layer.y_transform, f"{where}.y_transform")
        x_refs.add(layer.x_transform)
        y_refs.add(layer.y_transform)
    for i, axis in enumerate(node.axes):
        find_transform(node, axis.transform, f"axes[{i}].transform")
        (x_refs if axis.side.horizontal else y_refs).add(axis.transform)
    mixed = x_refs & y_refs
    if mixed:
        raise SceneError(
            "ORIENTATION_CONFLICT",
            f"transform '{sorted(mixed)[0]}' on node '{node.id}' is referenced as both x and y",
        )


def primary_transforms(node: PlotNode) -> tuple[AxisTransform | None, AxisTransform | None]:
    """The (x, y) transform pair annotations are resolved against.

    First pair referenced by a layer, falling back to the first horizontal /
    vertical axis reference, else None.
    """
    x = y = None
    for layer in node.layers:
        x = find_transform(node, layer.x_transform, "layers")
        y = find_transform(node, layer.y_transform, "layers")
        break
    if x is None:
        for axis in node.axes:
            if axis.side.horizontal and x is None:
                x = find_transform(node, axis.transform, "axes")
            if not axis.side.horizontal and y is None:
                y = find_transform(node, axis.transform, "axes")
    return x, y


# --- component enumeration -------------------------------------------------
#
# Components are the units of render caching and of change tracking: one per
# layer, one per axis, one per node's annotation group, one per node
# decoration (title).  ChangeRecords and tile cache stats both speak in these
# ids, which is what makes invalidation testable.

ComponentId = tuple


def layer_component(node_id: str, layer_id: str) -> ComponentId:
    return ("layer", node_id, layer_id)


def axis_component(node_id: str, axis_index: int) -> ComponentId:
    return ("axis", node_id, axis_index)


def annotations_component(node_id: str) -> ComponentId:
    return ("annotations", node_id)


def decoration_component(node_id: str) -> ComponentId:
    return ("decoration", node_id)


def scene_components(root: PlotNode) -> list[ComponentId]:
    """All renderable component ids, in composition order."""
    out: list[ComponentId] = []
    for node in iter_nodes(root):
        if node.title:
            out.append(decoration_component(node.id))
        for layer in sorted(node.layers, key=lambda l: l.z_order):
            if layer.visible:
                out.append(layer_component(node.id, layer.id))
        if node.annotations:
            out.append(annotations_component(node.id))
        for i, axis in enumerate(node.axes):
            if axis.visible:
                out.append(axis_component(node.id, i))
    return out


def replace_node(root: PlotNode, target_id: str, new_node: PlotNode) -> PlotNode:
    """Functional single-node replacement; returns a new tree."""
    if root.id == target_id:
        return new_node
    changed = False
    kids = []
    for child in root.children:
        nk = replace_node(child, target_id, new_node)
        changed = changed or nk is not child
        kids.append(nk)
    if not changed:
        return root
    return replace(root, children=tuple(kids))
