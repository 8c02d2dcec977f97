"""EPS export.

Consumes the same draw lists as the rasterizer, emitting an EPSF-3.0 body in
a small PostScript subset (paths, rectfill/rectclip, arcs, setdash, show,
colorimage with ASCII-hex samples).  Coordinates flip to the PostScript
convention via y' = H - y.  EPS has no alpha channel, so translucent colors
are flattened toward white, which is exact over the default background.

Text anchoring convention: `show` starts at the glyph-box baseline, i.e. the
bottom-left of the box (x, y + glyph height) in device terms; rotated text is
emitted inside translate/rotate with the same convention.  Consumers can
recover the exact device-space box from the current font size.
"""

from __future__ import annotations

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
)
from .model import Color

_HEX_WRAP = 76


def _num(v: float) -> str:
    r = round(float(v), 4)
    if r == int(r):
        return str(int(r))
    return f"{r:.4f}".rstrip("0")


def _rgb(color: Color) -> str:
    # flatten alpha toward white; exact for opaque colors
    a = color[3] / 255.0
    parts = [(a * c + (1.0 - a) * 255.0) / 255.0 for c in color[:3]]
    return " ".join(_num(p) for p in parts) + " setrgbcolor"


def _wrap(tokens: list[str], width: int = 200) -> list[str]:
    lines, cur = [], ""
    for tok in tokens:
        if cur and len(cur) + 1 + len(tok) > width:
            lines.append(cur)
            cur = tok
        else:
            cur = tok if not cur else cur + " " + tok
    if cur:
        lines.append(cur)
    return lines


class _Writer:
    def __init__(self, width: int, height: int):
        self.h = float(height)
        self.lines: list[str] = [
            "%!PS-Adobe-3.0 EPSF-3.0",
            f"%%BoundingBox: 0 0 {int(width)} {int(height)}",
            "%%Pages: 1",
            "%%EndComments",
            "1 setlinecap 1 setlinejoin",
        ]

    def _flip(self, y: float) -> float:
        return self.h - y

    def fill_rect(self, p: FillRect) -> None:
        x0, x1 = min(p.x0, p.x1), max(p.x0, p.x1)
        y0, y1 = min(p.y0, p.y1), max(p.y0, p.y1)
        self.lines.append(_rgb(p.color))
        self.lines.append(
            f"{_num(x0)} {_num(self._flip(y1))} {_num(x1 - x0)} {_num(y1 - y0)} rectfill"
        )

    def polyline(self, p: Polyline) -> None:
        pts = list(p.points)
        if len(pts) < 2:
            return
        self.lines.append(_rgb(p.color))
        self.lines.append(f"{_num(p.width)} setlinewidth")
        if p.dash is not None:
            self.lines.append(f"[{_num(p.dash[0])} {_num(p.dash[1])}] 0 setdash")
        else:
            self.lines.append("[] 0 setdash")
        toks = ["newpath"]
        for i, (x, y) in enumerate(pts):
            toks += [_num(x), _num(self._flip(y)), "moveto" if i == 0 else "lineto"]
        toks.append("stroke")
        self.lines.extend(_wrap(toks))

    def fill_polygon(self, p: FillPolygon) -> None:
        pts = list(p.points)
        if len(pts) < 3:
            return
        self.lines.append(_rgb(p.color))
        toks = ["newpath"]
        for i, (x, y) in enumerate(pts):
            toks += [_num(x), _num(self._flip(y)), "moveto" if i == 0 else "lineto"]
        toks += ["closepath", "eofill"]
        self.lines.extend(_wrap(toks))

    def stroke_circle(self, p: StrokeCircle) -> None:
        self.lines.append(_rgb(p.color))
        self.lines.append(f"{_num(p.width)} setlinewidth")
        self.lines.append("[] 0 setdash")
        self.lines.append(
            f"newpath {_num(p.cx)} {_num(self._flip(p.cy))} {_num(p.r)} 0 360 arc stroke"
        )

    def fill_circle(self, p: FillCircle) -> None:
        self.lines.append(_rgb(p.color))
        self.lines.append(
            f"newpath {_num(p.cx)} {_num(self._flip(p.cy))} {_num(p.r)} 0 360 arc fill"
        )

    def text(self, p: Text) -> None:
        self.lines.append(_rgb(p.color))
        self.lines.append(f"/Helvetica findfont {_num(p.size)} scalefont setfont")
        gh = font.glyph_box(p.size)[1]
        body = p.text.replace("\\", r"\\").replace("(", r"\(").replace(")", r"\)")
        if p.rotated:
            tw = font.text_extent(p.text, p.size)[0]
            tx, ty = p.x + gh, self._flip(p.y + tw)
            self.lines.append(
                f"gsave {_num(tx)} {_num(ty)} translate 90 rotate 0 0 moveto ({body}) show grestore"
            )
        else:
            self.lines.append(f"{_num(p.x)} {_num(self._flip(p.y + gh))} moveto ({body}) show")

    def image(self, p: Image) -> None:
        w, h = p.x1 - p.x0, p.y1 - p.y0
        if w <= 0 or h <= 0:
            return
        self.lines.append(f"gsave {_num(p.x0)} {_num(self._flip(p.y1))} translate {w} {h} scale")
        self.lines.append(f"/picstr {w * 3} string def")
        self.lines.append(
            f"{w} {h} 8 [{w} 0 0 -{h} 0 {h}] {{currentfile picstr readhexstring pop}} false 3 colorimage"
        )
        data = p.rgb.tobytes().hex()
        for i in range(0, len(data), _HEX_WRAP):
            self.lines.append(data[i : i + _HEX_WRAP])
        self.lines.append("grestore")

    def push_clip(self, p: PushClip) -> None:
        self.lines.append(
            f"gsave {p.x0} {_num(self._flip(p.y1))} {p.x1 - p.x0} {p.y1 - p.y0} rectclip"
        )

    def pop_clip(self) -> None:
        self.lines.append("grestore")


def export_eps(prims: list, width: int, height: int) -> str:
    """Serialize a draw list to EPSF-3.0 text with a 0 0 W H bounding box."""
    w = _Writer(width, height)
    for p in prims:
        if isinstance(p, PushClip):
            w.push_clip(p)
        elif isinstance(p, PopClip):
            w.pop_clip()
        elif isinstance(p, FillRect):
            w.fill_rect(p)
        elif isinstance(p, Polyline):
            w.polyline(p)
        elif isinstance(p, FillPolygon):
            w.fill_polygon(p)
        elif isinstance(p, StrokeCircle):
            w.stroke_circle(p)
        elif isinstance(p, FillCircle):
            w.fill_circle(p)
        elif isinstance(p, Text):
            w.text(p)
        elif isinstance(p, Image):
            w.image(p)
        else:
            raise TypeError(f"unknown primitive {type(p).__name__}")
    w.lines.append("showpage")
    w.lines.append("%%EOF")
    return "\n".join(w.lines) + "\n"
