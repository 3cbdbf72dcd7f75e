"""Glyph width metrics for the built-in fonts the PDF subset supports.

Widths are in 1/1000 of the font size (the AFM convention). Accented
letters reuse their base letter's width, which matches the Helvetica
metrics for the Latin-1 range. Unknown glyphs fall back to a default so
width computation is total.
"""

from __future__ import annotations

import unicodedata

DEFAULT_WIDTH = 556

# Standard Helvetica AFM widths for ASCII 32..126.
_HELVETICA_ASCII = [
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333,
    278, 278, 556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278,
    584, 584, 584, 556, 1015, 667, 667, 722, 722, 667, 611, 778, 722, 278,
    500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944,
    667, 667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556,
    278, 556, 556, 222, 222, 500, 222, 833, 556, 556, 556, 556, 333, 500,
    278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584,
]

HELVETICA_WIDTHS: dict[str, int] = {chr(32 + i): w for i, w in enumerate(_HELVETICA_ASCII)}
# A few non-decomposable Latin-1 glyphs the corpus can produce.
HELVETICA_WIDTHS.update({"°": 400, "«": 556, "»": 556, "€": 556, "’": 222, "‘": 222, "–": 556, "—": 1000})


def _base_char(ch: str) -> str:
    decomposed = unicodedata.normalize("NFKD", ch)
    for part in decomposed:
        if not unicodedata.combining(part):
            return part
    return ch


def glyph_width(ch: str, font: str = "Helvetica") -> int:
    """Width of one glyph in thousandths of the font size."""
    if font.startswith("Courier"):
        return 600
    table = HELVETICA_WIDTHS
    if ch in table:
        return table[ch]
    base = _base_char(ch)
    return table.get(base, DEFAULT_WIDTH)


def text_width(text: str, size: float, font: str = "Helvetica") -> float:
    """Advance width of a string at the given size, in points."""
    return sum(glyph_width(ch, font) for ch in text) * size / 1000.0


def widths_array(font: str = "Helvetica", first: int = 32, last: int = 255) -> list[int]:
    """Per-code widths for a WinAnsi-encoded /Widths entry."""
    out = []
    for code in range(first, last + 1):
        try:
            ch = bytes([code]).decode("cp1252")
        except UnicodeDecodeError:
            out.append(DEFAULT_WIDTH)
            continue
        out.append(glyph_width(ch, font))
    return out
