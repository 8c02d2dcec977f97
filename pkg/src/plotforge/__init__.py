"""plotforge: deterministic 2D scientific plotting.

An immutable scene tree rendered through per-component cached tiles, with
linear/log/date/sexagesimal axes, a serialized command engine for interactive
use, PNG/EPS export, and a socket protocol for remote viewers.
"""

from .engine import ClickReadout, CommandKind, Engine
from .errors import (
    EngineError,
    ExportError,
    FormatError,
    LayoutError,
    PathError,
    PlotforgeError,
    SceneError,
    SpecError,
    TransformError,
)
from .eps import export_eps
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
from .paths import apply_change, enumerate_paths, resolve
from .pipeline import emit_drawlist, render_scene
from .png import encode_png
from .session import SceneSession
from .specdoc import load_spec, validate_spec
from .ticks import generate_ticks
from .transforms import forward, inverse, wheel_zoom, zoom_to_fraction

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "AxisKind",
    "AxisTransform",
    "ChartKind",
    "ClickReadout",
    "CommandKind",
    "Engine",
    "EngineError",
    "ExportError",
    "FormatError",
    "GridGraph",
    "GridNorm",
    "HLineAnnotation",
    "Layer",
    "LayoutError",
    "LayoutHints",
    "LineKind",
    "Margins",
    "PathError",
    "PlotNode",
    "PlotforgeError",
    "Range",
    "RampKind",
    "RectAnnotation",
    "RgbGraph",
    "SceneError",
    "SceneSession",
    "SexaMode",
    "Side",
    "SpecError",
    "Style",
    "SymbolKind",
    "TextAnnotation",
    "TickConfig",
    "TransformError",
    "VLineAnnotation",
    "XYErrorGraph",
    "XYGraph",
    "apply_change",
    "emit_drawlist",
    "encode_png",
    "enumerate_paths",
    "export_eps",
    "forward",
    "generate_ticks",
    "inverse",
    "load_spec",
    "render_scene",
    "resolve",
    "validate_scene",
    "validate_spec",
    "wheel_zoom",
    "zoom_to_fraction",
]
