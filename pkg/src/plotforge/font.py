"""Built-in 5x7 bitmap font.

Ships with the package so text output is byte-deterministic on every host: no
system font lookup, no shaping library.  Metrics agree with the layout table
(advance 0.6*size, line height 1.2*size); glyphs scale by nearest neighbor,
1:1 at size 10.  The prime marks used by sexagesimal labels alias to ASCII
quotes so vector text (which carries the same strings) stays in Latin-1.
"""

from __future__ import annotations

import math

import numpy as np

BASE_SIZE = 10.0

_G = {
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
    "0": (".XXX.", "X...X", "X..XX", "X.X.X", "XX..X", "X...X", ".XXX."),
    "1": ("..X..", ".XX..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "2": (".XXX.", "X...X", "....X", "...X.", "..X..", ".X...", "XXXXX"),
    "3": ("XXXXX", "....X", "...X.", "..XX.", "....X", "X...X", ".XXX."),
    "4": ("...X.", "..XX.", ".X.X.", "X..X.", "XXXXX", "...X.", "...X."),
    "5": ("XXXXX", "X....", "XXXX.", "....X", "....X", "X...X", ".XXX."),
    "6": ("..XX.", ".X...", "X....", "XXXX.", "X...X", "X...X", ".XXX."),
    "7": ("XXXXX", "....X", "...X.", "..X..", ".X...", ".X...", ".X..."),
    "8": (".XXX.", "X...X", "X...X", ".XXX.", "X...X", "X...X", ".XXX."),
    "9": (".XXX.", "X...X", "X...X", ".XXXX", "....X", "...X.", ".XX.."),
    "A": (".XXX.", "X...X", "X...X", "XXXXX", "X...X", "X...X", "X...X"),
    "B": ("XXXX.", "X...X", "X...X", "XXXX.", "X...X", "X...X", "XXXX."),
    "C": (".XXX.", "X...X", "X....", "X....", "X....", "X...X", ".XXX."),
    "D": ("XXXX.", "X...X", "X...X", "X...X", "X...X", "X...X", "XXXX."),
    "E": ("XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "XXXXX"),
    "F": ("XXXXX", "X....", "X....", "XXXX.", "X....", "X....", "X...."),
    "G": (".XXX.", "X...X", "X....", "X.XXX", "X...X", "X...X", ".XXXX"),
    "H": ("X...X", "X...X", "X...X", "XXXXX", "X...X", "X...X", "X...X"),
    "I": (".XXX.", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "J": ("..XXX", "...X.", "...X.", "...X.", "...X.", "X..X.", ".XX.."),
    "K": ("X...X", "X..X.", "X.X..", "XX...", "X.X..", "X..X.", "X...X"),
    "L": ("X....", "X....", "X....", "X....", "X....", "X....", "XXXXX"),
    "M": ("X...X", "XX.XX", "X.X.X", "X.X.X", "X...X", "X...X", "X...X"),
    "N": ("X...X", "XX..X", "X.X.X", "X..XX", "X...X", "X...X", "X...X"),
    "O": (".XXX.", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."),
    "P": ("XXXX.", "X...X", "X...X", "XXXX.", "X....", "X....", "X...."),
    "Q": (".XXX.", "X...X", "X...X", "X...X", "X.X.X", "X..X.", ".XX.X"),
    "R": ("XXXX.", "X...X", "X...X", "XXXX.", "X.X..", "X..X.", "X...X"),
    "S": (".XXXX", "X....", "X....", ".XXX.", "....X", "....X", "XXXX."),
    "T": ("XXXXX", "..X..", "..X..", "..X..", "..X..", "..X..", "..X.."),
    "U": ("X...X", "X...X", "X...X", "X...X", "X...X", "X...X", ".XXX."),
    "V": ("X...X", "X...X", "X...X", "X...X", "X...X", ".X.X.", "..X.."),
    "W": ("X...X", "X...X", "X...X", "X.X.X", "X.X.X", "XX.XX", "X...X"),
    "X": ("X...X", "X...X", ".X.X.", "..X..", ".X.X.", "X...X", "X...X"),
    "Y": ("X...X", "X...X", ".X.X.", "..X..", "..X..", "..X..", "..X.."),
    "Z": ("XXXXX", "....X", "...X.", "..X..", ".X...", "X....", "XXXXX"),
    "a": (".....", ".....", ".XXX.", "....X", ".XXXX", "X...X", ".XXXX"),
    "b": ("X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "XXXX."),
    "c": (".....", ".....", ".XXXX", "X....", "X....", "X....", ".XXXX"),
    "d": ("....X", "....X", ".XXXX", "X...X", "X...X", "X...X", ".XXXX"),
    "e": (".....", ".....", ".XXX.", "X...X", "XXXXX", "X....", ".XXX."),
    "f": ("..XX.", ".X..X", ".X...", "XXX..", ".X...", ".X...", ".X..."),
    "g": (".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", ".XXX."),
    "h": ("X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "X...X"),
    "i": ("..X..", ".....", ".XX..", "..X..", "..X..", "..X..", ".XXX."),
    "j": ("...X.", ".....", "..XX.", "...X.", "...X.", "X..X.", ".XX.."),
    "k": ("X....", "X....", "X..X.", "X.X..", "XX...", "X.X..", "X..X."),
    "l": (".XX..", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "m": (".....", ".....", "XX.X.", "X.X.X", "X.X.X", "X.X.X", "X.X.X"),
    "n": (".....", ".....", "XXXX.", "X...X", "X...X", "X...X", "X...X"),
    "o": (".....", ".....", ".XXX.", "X...X", "X...X", "X...X", ".XXX."),
    "p": (".....", "XXXX.", "X...X", "X...X", "XXXX.", "X....", "X...."),
    "q": (".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", "....X"),
    "r": (".....", ".....", "X.XX.", "XX..X", "X....", "X....", "X...."),
    "s": (".....", ".....", ".XXXX", "X....", ".XXX.", "....X", "XXXX."),
    "t": (".X...", ".X...", "XXX..", ".X...", ".X...", ".X..X", "..XX."),
    "u": (".....", ".....", "X...X", "X...X", "X...X", "X..XX", ".XX.X"),
    "v": (".....", ".....", "X...X", "X...X", "X...X", ".X.X.", "..X.."),
    "w": (".....", ".....", "X...X", "X...X", "X.X.X", "X.X.X", ".X.X."),
    "x": (".....", ".....", "X...X", ".X.X.", "..X..", ".X.X.", "X...X"),
    "y": (".....", "X...X", "X...X", ".XXXX", "....X", "X...X", ".XXX."),
    "z": (".....", ".....", "XXXXX", "...X.", "..X..", ".X...", "XXXXX"),
    ".": (".....", ".....", ".....", ".....", ".....", ".XX..", ".XX.."),
    ",": (".....", ".....", ".....", ".....", ".XX..", "..X..", ".X..."),
    ":": (".....", ".XX..", ".XX..", ".....", ".XX..", ".XX..", "....."),
    ";": (".....", ".XX..", ".XX..", ".....", ".XX..", "..X..", ".X..."),
    "-": (".....", ".....", ".....", "XXXXX", ".....", ".....", "....."),
    "+": (".....", "..X..", "..X..", "XXXXX", "..X..", "..X..", "....."),
    "^": ("..X..", ".X.X.", "X...X", ".....", ".....", ".....", "....."),
    "'": ("..X..", "..X..", ".....", ".....", ".....", ".....", "....."),
    '"': (".X.X.", ".X.X.", ".....", ".....", ".....", ".....", "....."),
    "(": ("...X.", "..X..", ".X...", ".X...", ".X...", "..X..", "...X."),
    ")": (".X...", "..X..", "...X.", "...X.", "...X.", "..X..", ".X..."),
    "[": (".XXX.", ".X...", ".X...", ".X...", ".X...", ".X...", ".XXX."),
    "]": (".XXX.", "...X.", "...X.", "...X.", "...X.", "...X.", ".XXX."),
    "/": ("....X", "...X.", "...X.", "..X..", ".X...", ".X...", "X...."),
    "\\": ("X....", ".X...", ".X...", "..X..", "...X.", "...X.", "....X"),
    "%": ("XX..X", "XX.X.", "...X.", "..X..", ".X...", ".X.XX", "X..XX"),
    "=": (".....", ".....", "XXXXX", ".....", "XXXXX", ".....", "....."),
    "_": (".....", ".....", ".....", ".....", ".....", ".....", "XXXXX"),
    "!": ("..X..", "..X..", "..X..", "..X..", "..X..", ".....", "..X.."),
    "?": (".XXX.", "X...X", "....X", "...X.", "..X..", ".....", "..X.."),
    "*": (".....", "..X..", "X.X.X", ".XXX.", "X.X.X", "..X..", "....."),
    "<": ("...X.", "..X..", ".X...", "X....", ".X...", "..X..", "...X."),
    ">": (".X...", "..X..", "...X.", "....X", "...X.", "..X..", ".X..."),
    "#": (".X.X.", ".X.X.", "XXXXX", ".X.X.", "XXXXX", ".X.X.", ".X.X."),
    "|": ("..X..", "..X..", "..X..", "..X..", "..X..", "..X..", "..X.."),
    "°": (".XX..", "X..X.", "X..X.", ".XX..", ".....", ".....", "....."),
    "±": ("..X..", "..X..", "XXXXX", "..X..", "..X..", ".....", "XXXXX"),
}

_ALIASES = {"′": "'", "″": '"'}  # prime / double prime
_FALLBACK = ("XXXXX", "X...X", "X...X", "X...X", "X...X", "X...X", "XXXXX")

GLYPH_W = 5
GLYPH_H = 7

_masks: dict[str, np.ndarray] = {}


def glyph_mask(ch: str) -> np.ndarray:
    """7x5 uint8 bitmap for one character."""
    ch = _ALIASES.get(ch, ch)
    m = _masks.get(ch)
    if m is None:
        rows = _G.get(ch, _FALLBACK)
        m = np.array([[1 if c == "X" else 0 for c in row] for row in rows], dtype=np.uint8)
        _masks[ch] = m
    return m


def advance(size: float) -> float:
    return 0.6 * size


def glyph_box(size: float) -> tuple[int, int]:
    s = size / BASE_SIZE
    return (round(GLYPH_W * s), round(GLYPH_H * s))


def text_extent(text: str, size: float) -> tuple[int, int]:
    """(width, height) of text_mask(text, size) without rendering it."""
    gh = glyph_box(size)[1]
    return (max(1, math.ceil(len(text) * advance(size))), max(gh, 1))


def text_mask(text: str, size: float) -> np.ndarray:
    """uint8 (h, w) mask of the whole string; nearest-neighbor scaled."""
    gw, gh = glyph_box(size)
    n = len(text)
    width = max(1, math.ceil(n * advance(size)))
    out = np.zeros((max(gh, 1), width), dtype=np.uint8)
    if gw < 1 or gh < 1:
        return out
    sy = GLYPH_H / gh
    sx = GLYPH_W / gw
    rows = np.minimum((np.arange(gh) * sy).astype(int), GLYPH_H - 1)
    cols = np.minimum((np.arange(gw) * sx).astype(int), GLYPH_W - 1)
    for k, ch in enumerate(text):
        x = round(k * advance(size))
        if x + gw > width:
            break
        scaled = glyph_mask(ch)[np.ix_(rows, cols)]
        out[:gh, x : x + gw] |= scaled
    return out
