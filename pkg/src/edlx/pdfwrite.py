"""Minimal deterministic PDF writer for subset round-trips.

Emits PDF 1.4 files containing only what the subset parser understands:
one Flate-compressed content stream per page, WinAnsi-encoded Helvetica
with an explicit /Widths array, and absolute Tm positioning per line.
Identical documents produce identical bytes.
"""

from __future__ import annotations

import zlib

from . import fonts
from .document import Document

FONT_NAME = "Helvetica"
ASCENT = 0.8
DESCENT = 0.2


def _fmt(value: float) -> str:
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _escape(text: str) -> bytes:
    try:
        raw = text.encode("cp1252")
    except UnicodeEncodeError as exc:
        raise ValueError(f"text {text!r} not representable in WinAnsi encoding: {exc}") from exc
    return raw.replace(b"\\", b"\\\\").replace(b"(", b"\\(").replace(b")", b"\\)")


def _page_content(page) -> bytes:
    height = page.geometry.height
    chunks = []
    for line in page.lines:
        size = line.y1 - line.y0
        if size <= 0:
            raise ValueError(f"line {line.text!r} has non-positive height {size}")
        baseline = height - line.y1 + DESCENT * size
        chunks.append(
            b"BT /F1 %s Tf 1 0 0 1 %s %s Tm (%s) Tj ET"
            % (_fmt(size).encode(), _fmt(line.x0).encode(), _fmt(baseline).encode(), _escape(line.text))
        )
    return b"\n".join(chunks)


def emit_pdf(doc: Document) -> bytes:
    """Serialize a document to subset-PDF bytes.

    Boxes must have height equal to the intended font size (the parser
    derives height as ascent+descent = 1.0x size), and x1 is recomputed by
    the parser from glyph widths, so documents built with fonts.text_width
    round-trip exactly.
    """
    objects: list[bytes] = []

    def add(body: bytes) -> int:
        objects.append(body)
        return len(objects)

    n_pages = len(doc.pages)
    # object layout: 1 catalog, 2 pages, 3 font, then (page, content) pairs
    catalog_id = add(b"<< /Type /Catalog /Pages 2 0 R >>")
    kids = " ".join(f"{4 + 2 * i} 0 R" for i in range(n_pages))
    add(b"<< /Type /Pages /Kids [%s] /Count %d >>" % (kids.encode(), n_pages))
    widths = " ".join(str(w) for w in fonts.widths_array(FONT_NAME))
    add(
        b"<< /Type /Font /Subtype /Type1 /BaseFont /%s /Encoding /WinAnsiEncoding"
        b" /FirstChar 32 /LastChar 255 /Widths [%s] >>" % (FONT_NAME.encode(), widths.encode())
    )
    for i, page in enumerate(doc.pages):
        content = zlib.compress(_page_content(page), 6)
        page_id = 4 + 2 * i
        add(
            b"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 %s %s] /Contents %d 0 R"
            b" /Resources << /Font << /F1 3 0 R >> >> >>"
            % (_fmt(page.geometry.width).encode(), _fmt(page.geometry.height).encode(), page_id + 1)
        )
        add(b"<< /Length %d /Filter /FlateDecode >>\nstream\n%s\nendstream" % (len(content), content))

    out = bytearray()
    out += b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n"
    offsets = [0]
    for num, body in enumerate(objects, start=1):
        offsets.append(len(out))
        out += b"%d 0 obj\n" % num
        out += body
        out += b"\nendobj\n"
    xref_pos = len(out)
    out += b"xref\n0 %d\n" % (len(objects) + 1)
    out += b"0000000000 65535 f \n"
    for off in offsets[1:]:
        out += b"%010d 00000 n \n" % off
    out += b"trailer\n<< /Size %d /Root %d 0 R >>\n" % (len(objects) + 1, catalog_id)
    out += b"startxref\n%d\n%%%%EOF\n" % xref_pos
    return bytes(out)
