"""Builds scene model objects from plain dict/list data (the spec file shape).

Every construction error is re-raised as SpecError carrying the dotted path of
the offending field, which is what the CLI prints and exit code 2 relies on.
"""

from __future__ import annotations

from .errors import PlotforgeError, SpecError
from .model import (
    Axis,
    AxisKind,
    AxisTransform,
    ChartKind,
    GridGraph,
    GridNorm,
    HLineAnnotation,
    Layer,
    LayoutHints,
    LineKind,
    Margins,
    PlotNode,
    Range,
    RampKind,
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
    validate_scene,
)

_GRAPH_KEYS = {
    "xy": ("x", "y", "style"),
    "xy_error": ("x", "y", "x_err_lo", "x_err_hi", "y_err_lo", "y_err_hi", "style"),
    "grid": ("values", "x_extent", "y_extent", "ramp", "norm", "norm_range"),
    "rgb": ("r", "g", "b", "x_extent", "y_extent"),
}

_ANNOTATION_KEYS = {
    "text": ("x", "y", "text", "color", "fraction"),
    "hline": ("y", "style"),
    "vline": ("x", "style"),
    "rect": ("x0", "x1", "y0", "y1", "fill", "outline"),
}


def _fail(path: str, message: str):
    raise SpecError("SPEC_INVALID", message, path=path)


def _enum(cls, value, path: str):
    for member in cls:
        if member.value == value:
            return member
    _fail(path, f"'{value}' is not one of {[m.value for m in cls]}")


def _range(value, path: str) -> Range:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        _fail(path, "expected [lo, hi]")
    return Range(float(value[0]), float(value[1]))


def _color(value, path: str):
    if not isinstance(value, (list, tuple)) or len(value) != 4:
        _fail(path, "expected [r, g, b, a]")
    return tuple(int(v) for v in value)


def _style(data: dict | None, path: str) -> Style:
    if data is None:
        return Style()
    kwargs = {}
    if "chart" in data:
        kwargs["chart"] = _enum(ChartKind, data["chart"], f"{path}.chart")
    if "line" in data:
        kwargs["line"] = _enum(LineKind, data["line"], f"{path}.line")
    if "dash" in data:
        kwargs["dash"] = (float(data["dash"][0]), float(data["dash"][1]))
    if "symbol" in data:
        kwargs["symbol"] = _enum(SymbolKind, data["symbol"], f"{path}.symbol")
    if "symbol_size" in data:
        kwargs["symbol_size"] = float(data["symbol_size"])
    if "color" in data:
        kwargs["color"] = _color(data["color"], f"{path}.color")
    if "stroke_width" in data:
        kwargs["stroke_width"] = float(data["stroke_width"])
    return Style(**kwargs)


def _ticks(data: dict | None, path: str) -> TickConfig:
    if data is None:
        return TickConfig()
    return TickConfig(
        target_count=int(data.get("target_count", 5)),
        positions=tuple(data["positions"]) if data.get("positions") is not None else None,
        labels=tuple(data["labels"]) if data.get("labels") is not None else None,
        minor_count=data.get("minor_count"),
        label_format=data.get("label_format"),
        labels_visible=bool(data.get("labels_visible", True)),
    )


def _graph(data: dict, path: str):
    gtype = data.get("type")
    if gtype not in _GRAPH_KEYS:
        _fail(f"{path}.type", f"unknown graph type '{gtype}'")
    if gtype == "xy":
        return XYGraph(x=data.get("x", ()), y=data.get("y", ()), style=_style(data.get("style"), f"{path}.style"))
    if gtype == "xy_error":
        return XYErrorGraph(
            x=data.get("x", ()),
            y=data.get("y", ()),
            x_err_lo=data.get("x_err_lo"),
            x_err_hi=data.get("x_err_hi"),
            y_err_lo=data.get("y_err_lo"),
            y_err_hi=data.get("y_err_hi"),
            style=_style(data.get("style"), f"{path}.style"),
        )
    if gtype == "grid":
        return GridGraph(
            values=data.get("values", ()),
            x_extent=_range(data.get("x_extent"), f"{path}.x_extent"),
            y_extent=_range(data.get("y_extent"), f"{path}.y_extent"),
            ramp=_enum(RampKind, data.get("ramp", "gray"), f"{path}.ramp"),
            norm=_enum(GridNorm, data.get("norm", "minmax"), f"{path}.norm"),
            norm_range=_range(data["norm_range"], f"{path}.norm_range") if data.get("norm_range") else None,
        )
    return RgbGraph(
        r=data.get("r", ()),
        g=data.get("g", ()),
        b=data.get("b", ()),
        x_extent=_range(data.get("x_extent"), f"{path}.x_extent"),
        y_extent=_range(data.get("y_extent"), f"{path}.y_extent"),
    )


def _annotation(data: dict, path: str):
    atype = data.get("type")
    if atype not in _ANNOTATION_KEYS:
        _fail(f"{path}.type", f"unknown annotation type '{atype}'")
    if atype == "text":
        return TextAnnotation(
            x=float(data["x"]),
            y=float(data["y"]),
            text=str(data.get("text", "")),
            color=_color(data["color"], f"{path}.color") if "color" in data else (0, 0, 0, 255),
            fraction=bool(data.get("fraction", False)),
        )
    if atype == "hline":
        return HLineAnnotation(y=float(data["y"]), style=_style(data.get("style"), f"{path}.style"))
    if atype == "vline":
        return VLineAnnotation(x=float(data["x"]), style=_style(data.get("style"), f"{path}.style"))
    return RectAnnotation(
        x0=float(data["x0"]),
        x1=float(data["x1"]),
        y0=float(data["y0"]),
        y1=float(data["y1"]),
        fill=_color(data["fill"], f"{path}.fill") if "fill" in data else (200, 200, 200, 255),
        outline=_style(data["outline"], f"{path}.outline") if data.get("outline") else None,
    )


def _node(data: dict, path: str) -> PlotNode:
    transforms = []
    for i, t in enumerate(data.get("transforms", [])):
        tpath = f"{path}.transforms[{i}]"
        with _at(tpath):
            transforms.append(
                AxisTransform(
                    id=str(t["id"]),
                    kind=_enum(AxisKind, t.get("kind", "linear"), f"{tpath}.kind"),
                    range=_range(t.get("range", [0, 1]), f"{tpath}.range"),
                    inverted=bool(t.get("inverted", False)),
                    sexa_mode=_enum(SexaMode, t.get("sexa_mode", "hms"), f"{tpath}.sexa_mode"),
                )
            )
    axes = []
    for i, a in enumerate(data.get("axes", [])):
        apath = f"{path}.axes[{i}]"
        with _at(apath):
            axes.append(
                Axis(
                    side=_enum(Side, a.get("side"), f"{apath}.side"),
                    transform=str(a.get("transform", "")),
                    visible=bool(a.get("visible", True)),
                    ticks=_ticks(a.get("ticks"), f"{apath}.ticks"),
                    label=str(a.get("label", "")),
                    grid_lines=bool(a.get("grid_lines", False)),
                    outward=bool(a.get("outward", False)),
                )
            )
    layers = []
    for i, l in enumerate(data.get("layers", [])):
        lpath = f"{path}.layers[{i}]"
        with _at(lpath):
            graphs = tuple(
                _build_graph_at(g, f"{lpath}.graphs[{j}]") for j, g in enumerate(l.get("graphs", []))
            )
            layers.append(
                Layer(
                    id=str(l.get("id", f"layer{i}")),
                    x_transform=str(l.get("x_transform", "")),
                    y_transform=str(l.get("y_transform", "")),
                    graphs=graphs,
                    visible=bool(l.get("visible", True)),
                    z_order=int(l.get("z_order", 0)),
                )
            )
    annotations = []
    for i, a in enumerate(data.get("annotations", [])):
        apath = f"{path}.annotations[{i}]"
        with _at(apath):
            annotations.append(_annotation(a, apath))
    children = tuple(
        _node(c, f"{path}.children[{i}]") for i, c in enumerate(data.get("children", []))
    )
    hints = data.get("layout_hints") or {}
    margins = data.get("margins")
    with _at(path):
        return PlotNode(
            id=str(data.get("id", "plot")),
            title=data.get("title"),
            transforms=tuple(transforms),
            axes=tuple(axes),
            layers=tuple(layers),
            annotations=tuple(annotations),
            children=children,
            layout_hints=LayoutHints(
                cell=tuple(hints.get("cell", (0, 0))), weight=float(hints.get("weight", 1.0))
            ),
            margins=Margins(*[float(v) for v in margins]) if margins is not None else None,
        )


def _build_graph_at(data: dict, path: str):
    with _at(path):
        return _graph(data, path)


class _at:
    """Context manager attaching a spec path to model construction errors."""

    def __init__(self, path: str):
        self.path = path

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None or isinstance(exc, SpecError):
            return False
        if isinstance(exc, PlotforgeError):
            raise SpecError(exc.code, exc.reason, path=exc.path or self.path) from None
        if isinstance(exc, (KeyError, TypeError, ValueError, IndexError)):
            raise SpecError("SPEC_INVALID", str(exc) or exc.__class__.__name__, path=self.path) from None
        return False


def build_scene(data: dict, path: str = "scene") -> PlotNode:
    """dict -> validated PlotNode tree; raises SpecError with a field path."""
    scene = _node(data, path)
    with _at(path):
        validate_scene(scene)
    return scene
