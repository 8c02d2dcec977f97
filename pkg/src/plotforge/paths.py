"""Property paths: addressing, typed reads/writes, and change scoping.

A path like ``plots[0].axes[1].ticks.target_count`` addresses one mutable
field in a scene snapshot.  ``plots[k]`` is the k-th node of the tree in
depth-first preorder, so every node is reachable from a flat index (what a
property panel wants); nested nodes are also reachable through ``children``.

Writes are functional: ``apply_change`` returns a new snapshot plus a
ChangeRecord naming the minimal component set a renderer must redo.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

from . import model
from .errors import PathError
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
    LayoutHints,
    LineKind,
    Margins,
    PlotNode,
    RampKind,
    Range,
    RectAnnotation,
    RgbGraph,
    SexaMode,
    Side,
    Style,
    SymbolKind,
    TextAnnotation,
    TickConfig,
    VLineAnnotation,
    XYErrorGraph,
    XYGraph,
    iter_nodes,
    scene_components,
)

_SEGMENT = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?$")


def parse_path(path: str) -> list[tuple[str, int | None]]:
    segments = []
    if not path:
        raise PathError("BAD_PATH", "empty property path")
    for raw in path.split("."):
        m = _SEGMENT.match(raw)
        if not m:
            raise PathError("BAD_PATH", f"malformed path segment '{raw}'", path=path)
        name, idx = m.group(1), m.group(2)
        segments.append((name, int(idx) if idx is not None else None))
    return segments


# --- field registry ----------------------------------------------------------
# kind tags are the wire vocabulary for the property tree: a generic panel can
# render any of them without per-field code.

_ENUMS = {
    "axis_kind": AxisKind,
    "sexa_mode": SexaMode,
    "side": Side,
    "chart": ChartKind,
    "line": LineKind,
    "symbol": SymbolKind,
    "ramp": RampKind,
    "grid_norm": GridNorm,
}

# leaf fields: {type: {field: kind}}
LEAF_FIELDS: dict[type, dict[str, str]] = {
    PlotNode: {"title": "optional_string", "margins": "optional_margins"},
    LayoutHints: {"cell": "int_pair", "weight": "number"},
    AxisTransform: {
        "kind": "enum:axis_kind",
        "range": "range",
        "inverted": "boolean",
        "sexa_mode": "enum:sexa_mode",
    },
    Axis: {
        "side": "enum:side",
        "transform": "string",
        "visible": "boolean",
        "label": "string",
        "grid_lines": "boolean",
        "outward": "boolean",
    },
    TickConfig: {
        "target_count": "integer",
        "positions": "optional_number_list",
        "labels": "optional_string_list",
        "minor_count": "optional_integer",
        "label_format": "optional_string",
        "labels_visible": "boolean",
    },
    Layer: {
        "x_transform": "string",
        "y_transform": "string",
        "visible": "boolean",
        "z_order": "integer",
    },
    XYGraph: {"x": "number_list", "y": "number_list"},
    XYErrorGraph: {
        "x": "number_list",
        "y": "number_list",
        "x_err_lo": "optional_number_list",
        "x_err_hi": "optional_number_list",
        "y_err_lo": "optional_number_list",
        "y_err_hi": "optional_number_list",
    },
    GridGraph: {
        "values": "grid",
        "x_extent": "range",
        "y_extent": "range",
        "ramp": "enum:ramp",
        "norm": "enum:grid_norm",
        "norm_range": "optional_range",
    },
    RgbGraph: {"r": "grid", "g": "grid", "b": "grid", "x_extent": "range", "y_extent": "range"},
    Style: {
        "chart": "enum:chart",
        "line": "enum:line",
        "dash": "number_pair",
        "symbol": "enum:symbol",
        "symbol_size": "number",
        "color": "color",
        "stroke_width": "number",
    },
    TextAnnotation: {"x": "number", "y": "number", "text": "string", "color": "color", "fraction": "boolean"},
    HLineAnnotation: {"y": "number"},
    VLineAnnotation: {"x": "number"},
    RectAnnotation: {"x0": "number", "x1": "number", "y0": "number", "y1": "number", "fill": "color"},
}

# fields one can traverse through to reach nested leaves
BRANCH_FIELDS: dict[type, tuple[str, ...]] = {
    PlotNode: ("transforms", "axes", "layers", "annotations", "children", "layout_hints"),
    Axis: ("ticks",),
    Layer: ("graphs",),
    XYGraph: ("style",),
    XYErrorGraph: ("style",),
    HLineAnnotation: ("style",),
    VLineAnnotation: ("style",),
    RectAnnotation: ("outline",),
}


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _coerce(kind: str, value, path: str):
    """Convert plain (JSON-shaped) data into a model field value, or raise TYPE_MISMATCH."""

    def fail():
        raise PathError("TYPE_MISMATCH", f"cannot write {value!r} as {kind}", path=path)

    if kind.startswith("enum:"):
        enum_cls = _ENUMS[kind[5:]]
        if isinstance(value, enum_cls):
            return value
        if isinstance(value, str):
            for member in enum_cls:
                if member.value == value:
                    return member
        fail()
    if kind == "string":
        if not isinstance(value, str):
            fail()
        return value
    if kind == "optional_string":
        if value is None or isinstance(value, str):
            return value
        fail()
    if kind == "number":
        if not _is_number(value):
            fail()
        return float(value)
    if kind == "integer":
        if not isinstance(value, int) or isinstance(value, bool):
            fail()
        return value
    if kind == "optional_integer":
        if value is None:
            return None
        return _coerce("integer", value, path)
    if kind == "boolean":
        if not isinstance(value, bool):
            fail()
        return value
    if kind == "color":
        if isinstance(value, (list, tuple)) and len(value) == 4 and all(
            isinstance(v, int) and not isinstance(v, bool) and 0 <= v <= 255 for v in value
        ):
            return tuple(value)
        fail()
    if kind == "range":
        if isinstance(value, Range):
            return value
        if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_number(v) for v in value):
            return Range(float(value[0]), float(value[1]))
        fail()
    if kind == "optional_range":
        if value is None:
            return None
        return _coerce("range", value, path)
    if kind == "number_list":
        if isinstance(value, (list, tuple)) and all(_is_number(v) or v is None for v in value):
            return tuple(float("nan") if v is None else float(v) for v in value)
        fail()
    if kind == "optional_number_list":
        if value is None:
            return None
        return _coerce("number_list", value, path)
    if kind == "optional_string_list":
        if value is None:
            return None
        if isinstance(value, (list, tuple)) and all(isinstance(v, str) for v in value):
            return tuple(value)
        fail()
    if kind == "grid":
        if isinstance(value, (list, tuple)) and value and all(isinstance(r, (list, tuple)) for r in value):
            return tuple(_coerce("number_list", row, path) for row in value)
        fail()
    if kind == "number_pair":
        if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_number(v) for v in value):
            return (float(value[0]), float(value[1]))
        fail()
    if kind == "int_pair":
        if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            return (value[0], value[1])
        fail()
    if kind == "optional_margins":
        if value is None:
            return None
        if isinstance(value, Margins):
            return value
        if isinstance(value, (list, tuple)) and len(value) == 4 and all(_is_number(v) for v in value):
            return Margins(*(float(v) for v in value))
        fail()
    raise PathError("BAD_PATH", f"unknown field kind '{kind}'", path=path)


@dataclass(frozen=True)
class Handle:
    """Resolved address of one mutable field."""

    path: str
    kind: str
    value: object
    choices: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ChangeRecord:
    """What a mutation touched: the written paths and the affected render components."""

    paths: tuple[str, ...]
    affected: frozenset

    @staticmethod
    def union(records: list["ChangeRecord"]) -> "ChangeRecord":
        paths: tuple[str, ...] = ()
        affected: frozenset = frozenset()
        for r in records:
            paths = paths + r.paths
            affected = affected | r.affected
        return ChangeRecord(paths, affected)


class _Cursor:
    """Traversal state: current object plus the spine needed to rebuild the tree."""

    def __init__(self, scene: PlotNode, path: str):
        self.scene = scene
        self.path = path
        self.node: PlotNode | None = None
        # steps after the node: (owner object, field name, index or None)
        self.steps: list[tuple[object, str, int | None]] = []
        self.obj: object = None


def _walk(scene: PlotNode, path: str, segments) -> _Cursor:
    cur = _Cursor(scene, path)
    name, idx = segments[0]
    if name != "plots" or idx is None:
        raise PathError("BAD_PATH", "path must start with plots[k]", path=path)
    nodes = list(iter_nodes(scene))
    if idx >= len(nodes):
        raise PathError("INDEX_OUT_OF_RANGE", f"plots[{idx}] with {len(nodes)} plot(s)", path=path)
    cur.node = nodes[idx]
    cur.obj = cur.node
    for name, sub in segments[1:-1]:
        _descend(cur, name, sub)
    return cur


def _descend(cur: _Cursor, name: str, sub: int | None) -> None:
    owner = cur.obj
    branches = BRANCH_FIELDS.get(type(owner), ())
    if name not in branches:
        raise PathError("BAD_PATH", f"'{name}' is not traversable on {type(owner).__name__}", path=cur.path)
    value = getattr(owner, name)
    if sub is not None:
        if not isinstance(value, tuple):
            raise PathError("BAD_PATH", f"'{name}' is not indexable", path=cur.path)
        if sub >= len(value):
            raise PathError("INDEX_OUT_OF_RANGE", f"{name}[{sub}] with {len(value)} entries", path=cur.path)
        cur.steps.append((owner, name, sub))
        cur.obj = value[sub]
        if isinstance(cur.obj, PlotNode):
            cur.node = cur.obj
            cur.steps = []
    else:
        if value is None:
            raise PathError("BAD_PATH", f"'{name}' is not set on {type(owner).__name__}", path=cur.path)
        cur.steps.append((owner, name, None))
        cur.obj = value


def _leaf_kind(owner, name: str, path: str) -> str:
    kinds = LEAF_FIELDS.get(type(owner), {})
    if name not in kinds:
        raise PathError("BAD_PATH", f"'{name}' is not a mutable field of {type(owner).__name__}", path=path)
    return kinds[name]


def resolve(scene: PlotNode, path: str) -> Handle:
    """Address one mutable field; raises BAD_PATH / INDEX_OUT_OF_RANGE."""
    segments = parse_path(path)
    cur = _walk(scene, path, segments)
    name, sub = segments[-1]
    if sub is not None:
        raise PathError("BAD_PATH", f"cannot address an element of '{name}' directly", path=path)
    kind = _leaf_kind(cur.obj, name, path)
    choices = None
    if kind.startswith("enum:"):
        choices = tuple(m.value for m in _ENUMS[kind[5:]])
    from .canonical import to_plain

    return Handle(path=path, kind=kind, value=to_plain(getattr(cur.obj, name)), choices=choices)


def _rebuild(cur: _Cursor, new_leaf_owner) -> PlotNode:
    obj = new_leaf_owner
    for owner, name, sub in reversed(cur.steps):
        if sub is None:
            obj = replace(owner, **{name: obj})
        else:
            seq = getattr(owner, name)
            obj = replace(owner, **{name: seq[:sub] + (obj,) + seq[sub + 1 :]})
    new_node = obj
    assert isinstance(new_node, PlotNode)
    return model.replace_node(cur.scene, cur.node.id, new_node)


def apply_change(scene: PlotNode, path: str, value) -> tuple[PlotNode, ChangeRecord]:
    """Write one field (or, when the path names a graph and value is a dict,
    several graph fields atomically) and return the new snapshot."""
    segments = parse_path(path)
    cur = _walk(scene, path, segments)
    name, sub = segments[-1]

    if sub is not None:
        # terminal indexed segment: the path addresses a whole object, which is
        # writable only for graphs (atomic multi-field data replacement)
        _descend(cur, name, sub)
        if not isinstance(value, dict):
            raise PathError("TYPE_MISMATCH", "writing an object requires a field dict", path=path)
        kinds = LEAF_FIELDS.get(type(cur.obj), {})
        updates = {}
        for fname, fval in value.items():
            if fname not in kinds:
                raise PathError("BAD_PATH", f"'{fname}' is not a mutable field of {type(cur.obj).__name__}", path=path)
            updates[fname] = _coerce(kinds[fname], fval, path)
        new_owner = replace(cur.obj, **updates)
        owner, fname2, sub2 = cur.steps[-1]
        cur.steps = cur.steps[:-1]
        seq = getattr(owner, fname2)
        new_owner = replace(owner, **{fname2: seq[:sub2] + (new_owner,) + seq[sub2 + 1 :]})
        new_scene = _rebuild(cur, new_owner)
    else:
        kind = _leaf_kind(cur.obj, name, path)
        old_value = getattr(cur.obj, name)
        coerced = _coerce(kind, value, path)
        new_owner = replace(cur.obj, **{name: coerced})
        new_scene = _rebuild(cur, new_owner)
        # a title appearing or disappearing reflows the node, a text change does not
        if isinstance(cur.obj, PlotNode) and name == "title" and bool(old_value) != bool(coerced):
            model.validate_scene(new_scene)
            affected = {model.decoration_component(cur.node.id)} | set(scene_components(cur.node))
            return new_scene, ChangeRecord(paths=(path,), affected=frozenset(affected))

    model.validate_scene(new_scene)
    affected = _scope(scene, segments, name, cur)
    return new_scene, ChangeRecord(paths=(path,), affected=frozenset(affected))


def _scope(scene: PlotNode, segments, final_name: str, cur: _Cursor) -> set[ComponentId]:
    """Invalidation scope: the smallest sound component set for this write.

    style / graph data        -> owning layer
    tick config / axis label  -> owning axis
    transform range or kind   -> every referencing layer and axis (and the
                                 annotation group when it reads the transform)
    title text                -> node decoration
    margins / layout hints /
    axis side or visibility / -> node decoration plus the node's whole
    title presence toggle        subtree (measured strips move every rect)
    annotations               -> the node's annotation group
    """
    node = cur.node
    names = [s[0] for s in segments[1:]] or [final_name]
    head = names[0]

    if head == "layers":
        layer = node.layers[_first_idx(segments, "layers")]
        return {model.layer_component(node.id, layer.id)}
    if head == "axes":
        axis_idx = _first_idx(segments, "axes")
        if final_name in ("visible", "side", "transform"):
            return {model.axis_component(node.id, axis_idx)} | set(scene_components(node))
        return {model.axis_component(node.id, axis_idx)}
    if head == "transforms":
        tr_idx = _first_idx(segments, "transforms")
        tr = node.transforms[tr_idx]
        affected: set[ComponentId] = set()
        for layer in node.layers:
            if tr.id in (layer.x_transform, layer.y_transform):
                affected.add(model.layer_component(node.id, layer.id))
        for i, axis in enumerate(node.axes):
            if axis.transform == tr.id:
                affected.add(model.axis_component(node.id, i))
        px, py = model.primary_transforms(node)
        if node.annotations and tr.id in {t.id for t in (px, py) if t is not None}:
            affected.add(model.annotations_component(node.id))
        return affected
    if head == "annotations":
        return {model.annotations_component(node.id)}
    if head == "title":
        return {model.decoration_component(node.id)}
    if head in ("margins", "layout_hints"):
        return {model.decoration_component(node.id)} | set(scene_components(node))
    # unknown: be conservative, the whole scene
    return set(scene_components(scene))


def _first_idx(segments, name: str) -> int:
    for seg_name, seg_idx in segments:
        if seg_name == name and seg_idx is not None:
            return seg_idx
    raise PathError("BAD_PATH", f"expected an index on '{name}'")


def enumerate_paths(scene: PlotNode) -> list[Handle]:
    """Every writable leaf field in the scene, as resolved handles.

    Nodes are rooted at their flat ``plots[k]`` address, so each field appears
    exactly once.
    """
    from .canonical import to_plain

    out: list[Handle] = []

    def emit(obj, prefix: str):
        for fname, kind in LEAF_FIELDS.get(type(obj), {}).items():
            choices = tuple(m.value for m in _ENUMS[kind[5:]]) if kind.startswith("enum:") else None
            out.append(Handle(f"{prefix}.{fname}", kind, to_plain(getattr(obj, fname)), choices))
        for fname in BRANCH_FIELDS.get(type(obj), ()):
            value = getattr(obj, fname)
            if value is None or fname == "children":
                continue
            if isinstance(value, tuple):
                for i, item in enumerate(value):
                    emit(item, f"{prefix}.{fname}[{i}]")
            else:
                emit(value, f"{prefix}.{fname}")

    for k, node in enumerate(iter_nodes(scene)):
        emit(node, f"plots[{k}]")
    return out
