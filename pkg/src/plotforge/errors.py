"""Error types shared across the engine.

Every failure carries a stable machine-readable ``code`` plus, where it makes
sense, the property path of the offending field so CLI and protocol layers can
report precisely what went wrong.
"""

from __future__ import annotations


class PlotforgeError(Exception):
    """Base class; ``code`` is a stable identifier, ``path`` an optional property path."""

    def __init__(self, code: str, message: str, path: str | None = None):
        self.code = code
        self.path = path
        self.reason = message
        if path:
            message = f"{message} (at {path})"
        super().__init__(message)


class SceneError(PlotforgeError):
    """Scene construction or validation failure (UNRESOLVED_REF, INVALID_RANGE, ...)."""


class PathError(PlotforgeError):
    """Property path resolution failure (BAD_PATH, INDEX_OUT_OF_RANGE, TYPE_MISMATCH)."""


class TransformError(PlotforgeError):
    """Axis transform math failure (LOG_NONPOSITIVE_VALUE, SPAN_TOO_SMALL)."""


class LayoutError(PlotforgeError):
    """Geometry computation failure (CANVAS_TOO_SMALL)."""


class EngineError(PlotforgeError):
    """Command dispatch failure (SESSION_CLOSED, RECT_OUTSIDE_PLOT, END_WITHOUT_BEGIN)."""


class FormatError(PlotforgeError):
    """Label formatting failure (BAD_PATTERN)."""


class SpecError(PlotforgeError):
    """Declarative spec document failure (schema violation, missing data file)."""


class ExportError(PlotforgeError):
    """Output encoding failure (IO_FAILURE)."""
