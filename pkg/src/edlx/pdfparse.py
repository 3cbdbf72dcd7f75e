"""Parser for a restricted subset of PDF 1.4.

Supported: classic xref tables, unencrypted files, content streams that are
raw or Flate-compressed, text placed inside BT/ET blocks with the Tf, Td,
TD, Tm, Tj, TJ and T* operators, and simple fonts with WinAnsi or built-in
encodings. Everything else raises UnsupportedFeature naming the construct;
structural damage raises MalformedPdf. The parser never silently drops
content.

Coordinates are converted from PDF's bottom-left origin to the top-left
origin used everywhere else in this package. Glyph boxes take their height
from the font size (ascent 0.8x, descent 0.2x by default); runs sharing a
baseline are merged into one line when the horizontal gap stays below one
font size.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass, field

from . import fonts
from .document import Document, LineBox, Page, PageGeometry

MAX_INFLATE_BYTES = 64 * 1024 * 1024
MAX_OBJECTS = 100_000
MAX_PAGES = 5_000
MAX_RESOLVE_DEPTH = 32

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"


class UnsupportedFeature(Exception):
    """The file uses a PDF feature outside the supported subset."""


class MalformedPdf(Exception):
    """The file violates PDF structure rules the subset relies on."""


@dataclass(frozen=True)
class ParserConfig:
    """Tunable line-assembly constants (fractions of the font size)."""

    baseline_tol: float = 0.25
    max_gap: float = 1.0
    space_gap: float = 0.25
    overlap_tol: float = 0.25
    ascent: float = 0.8
    descent: float = 0.2


class _Name(str):
    """A PDF name object (distinct from string objects)."""


@dataclass(frozen=True)
class _Ref:
    num: int
    gen: int


class _Keyword(str):
    pass


class _Lexer:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def _skip_ws(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            ch = data[self.pos]
            if ch in _WHITESPACE:
                self.pos += 1
            elif ch == 0x25:  # '%' comment to end of line
                eol = data.find(b"\n", self.pos)
                self.pos = n if eol < 0 else eol + 1
            else:
                return

    def peek_byte(self) -> int | None:
        self._skip_ws()
        if self.pos >= len(self.data):
            return None
        return self.data[self.pos]

    def next_token(self):
        """Return one lexical token or None at end of input."""
        self._skip_ws()
        data, n = self.data, len(self.data)
        if self.pos >= n:
            return None
        ch = data[self.pos]
        if ch == 0x2F:  # /
            return self._read_name()
        if ch == 0x28:  # (
            return self._read_string()
        if ch == 0x3C:  # <
            if data.startswith(b"<<", self.pos):
                self.pos += 2
                return _Keyword("<<")
            return self._read_hex_string()
        if ch == 0x3E:  # >
            if data.startswith(b">>", self.pos):
                self.pos += 2
                return _Keyword(">>")
            raise MalformedPdf(f"stray '>' at offset {self.pos}")
        if ch == 0x5B:
            self.pos += 1
            return _Keyword("[")
        if ch == 0x5D:
            self.pos += 1
            return _Keyword("]")
        if ch in b"{}":
            raise UnsupportedFeature("PostScript procedure braces in content")
        if ch in b"+-0123456789.":
            return self._read_number()
        return self._read_keyword()

    def _read_name(self) -> _Name:
        data, n = self.data, len(self.data)
        self.pos += 1
        out = bytearray()
        while self.pos < n:
            ch = data[self.pos]
            if ch in _WHITESPACE or ch in _DELIMITERS:
                break
            if ch == 0x23 and self.pos + 2 < n:  # '#' hex escape
                try:
                    out.append(int(data[self.pos + 1 : self.pos + 3], 16))
                except ValueError as exc:
                    raise MalformedPdf(f"bad name escape at offset {self.pos}") from exc
                self.pos += 3
                continue
            out.append(ch)
            self.pos += 1
        return _Name(out.decode("latin-1"))

    def _read_number(self):
        m = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)").match(self.data, self.pos)
        if not m:
            raise MalformedPdf(f"bad number at offset {self.pos}")
        self.pos = m.end()
        text = m.group().decode("ascii")
        if "." in text:
            return float(text)
        return int(text)

    def _read_keyword(self) -> _Keyword:
        data, n = self.data, len(self.data)
        start = self.pos
        while self.pos < n and data[self.pos] not in _WHITESPACE and data[self.pos] not in _DELIMITERS:
            self.pos += 1
        if self.pos == start:
            raise MalformedPdf(f"unexpected byte {data[start]!r} at offset {start}")
        return _Keyword(data[start : self.pos].decode("latin-1"))

    def _read_string(self) -> bytes:
        data, n = self.data, len(self.data)
        self.pos += 1
        out = bytearray()
        depth = 1
        while self.pos < n:
            ch = data[self.pos]
            if ch == 0x5C:  # backslash
                self.pos += 1
                if self.pos >= n:
                    break
                esc = data[self.pos]
                mapped = {0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12, 0x28: 40, 0x29: 41, 0x5C: 92}
                if esc in mapped:
                    out.append(mapped[esc])
                    self.pos += 1
                elif esc in b"01234567":
                    digits = bytearray()
                    while self.pos < n and len(digits) < 3 and data[self.pos] in b"01234567":
                        digits.append(data[self.pos])
                        self.pos += 1
                    out.append(int(digits, 8) & 0xFF)
                elif esc in b"\r\n":
                    self.pos += 1  # line continuation
                    if esc == 0x0D and self.pos < n and data[self.pos] == 0x0A:
                        self.pos += 1
                else:
                    out.append(esc)
                    self.pos += 1
                continue
            if ch == 0x28:
                depth += 1
            elif ch == 0x29:
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return bytes(out)
            out.append(ch)
            self.pos += 1
        raise MalformedPdf("unterminated string literal")

    def _read_hex_string(self) -> bytes:
        end = self.data.find(b">", self.pos)
        if end < 0:
            raise MalformedPdf("unterminated hex string")
        digits = re.sub(rb"[\x00\t\n\x0c\r ]", b"", self.data[self.pos + 1 : end])
        self.pos = end + 1
        if len(digits) % 2:
            digits += b"0"
        try:
            return bytes.fromhex(digits.decode("ascii"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise MalformedPdf("invalid hex string") from exc


def _parse_object(lexer: _Lexer, depth: int = 0):
    """Recursive-descent parse of one object (with `N G R` reference folding)."""
    if depth > 64:
        raise MalformedPdf("object nesting too deep")
    token = lexer.next_token()
    return _parse_from_token(lexer, token, depth)


def _parse_from_token(lexer: _Lexer, token, depth: int):
    if token is None:
        raise MalformedPdf("unexpected end of data while parsing object")
    if isinstance(token, _Keyword):
        if token == "<<":
            result: dict = {}
            while True:
                key = lexer.next_token()
                if isinstance(key, _Keyword) and key == ">>":
                    return result
                if not isinstance(key, _Name):
                    raise MalformedPdf("dictionary key is not a name")
                result[str(key)] = _parse_object(lexer, depth + 1)
        if token == "[":
            items = []
            while True:
                item = lexer.next_token()
                if isinstance(item, _Keyword) and item == "]":
                    return items
                items.append(_maybe_ref(lexer, _parse_from_token(lexer, item, depth + 1)))
        if token == "true":
            return True
        if token == "false":
            return False
        if token == "null":
            return None
        raise MalformedPdf(f"unexpected keyword {str(token)!r} in object position")
    if isinstance(token, (int, float, bytes, _Name)):
        if isinstance(token, int):
            return _maybe_ref(lexer, token)
        return token
    raise MalformedPdf(f"cannot parse object from token {token!r}")


def _maybe_ref(lexer: _Lexer, value):
    """Fold `num gen R` into a _Ref, leaving the lexer untouched otherwise."""
    if not isinstance(value, int):
        return value
    save = lexer.pos
    second = lexer.next_token()
    if isinstance(second, int):
        third = lexer.next_token()
        if isinstance(third, _Keyword) and third == "R":
            return _Ref(value, second)
    lexer.pos = save
    return value


@dataclass
class _Font:
    encoding: str  # "winansi" or "builtin"
    base_font: str
    first_char: int | None = None
    widths: list[float] | None = None

    def decode_byte(self, code: int) -> str:
        if self.encoding == "winansi":
            try:
                return bytes([code]).decode("cp1252")
            except UnicodeDecodeError as exc:
                raise UnsupportedFeature(f"byte {code:#04x} undefined in WinAnsiEncoding") from exc
        if 32 <= code <= 126:
            return chr(code)
        raise UnsupportedFeature(f"byte {code:#04x} under built-in font encoding")

    def glyph_width(self, code: int, ch: str) -> float:
        if self.widths is not None and self.first_char is not None:
            idx = code - self.first_char
            if 0 <= idx < len(self.widths):
                return float(self.widths[idx])
        return float(fonts.glyph_width(ch, self.base_font))


@dataclass
class _Run:
    x0: float
    x1: float
    baseline: float
    size: float
    text: str


@dataclass
class _LineAcc:
    x0: float
    x1: float
    top: float
    bottom: float
    baseline: float
    size: float
    text: str


class _PdfFile:
    def __init__(self, data: bytes):
        self.data = data
        self.offsets: dict[int, int] = {}
        self.trailer: dict = {}
        self._cache: dict[int, object] = {}
        self._load_xref()

    def _load_xref(self):
        data = self.data
        if b"%PDF-" not in data[:1024]:
            raise MalformedPdf("missing %PDF header")
        tail = data[-2048:]
        idx = tail.rfind(b"startxref")
        if idx < 0:
            raise MalformedPdf("missing startxref")
        lexer = _Lexer(tail, idx + len(b"startxref"))
        start = lexer.next_token()
        if not isinstance(start, int) or not (0 <= start < len(data)):
            raise MalformedPdf("invalid startxref offset")
        seen = set()
        offset = start
        while True:
            if offset in seen:
                raise MalformedPdf("xref /Prev cycle")
            seen.add(offset)
            offset = self._read_xref_section(offset)
            if offset is None:
                break
        if "Encrypt" in self.trailer:
            raise UnsupportedFeature("encrypted document")
        if "Root" not in self.trailer:
            raise MalformedPdf("trailer has no /Root")

    def _read_xref_section(self, offset: int) -> int | None:
        lexer = _Lexer(self.data, offset)
        first = lexer.next_token()
        if isinstance(first, int):
            raise UnsupportedFeature("cross-reference stream (PDF 1.5)")
        if not (isinstance(first, _Keyword) and first == "xref"):
            raise MalformedPdf(f"no xref table at offset {offset}")
        while True:
            token = lexer.next_token()
            if isinstance(token, _Keyword) and token == "trailer":
                break
            if not isinstance(token, int):
                raise MalformedPdf("bad xref subsection header")
            count = lexer.next_token()
            if not isinstance(count, int) or count < 0 or count > MAX_OBJECTS:
                raise MalformedPdf("bad xref subsection count")
            lexer._skip_ws()
            for i in range(count):
                entry = self.data[lexer.pos : lexer.pos + 20]
                m = re.match(rb"(\d{10}) (\d{5}) ([nf])", entry)
                if not m:
                    raise MalformedPdf(f"bad xref entry for object {token + i}")
                if m.group(3) == b"n":
                    self.offsets.setdefault(token + i, int(m.group(1)))
                lexer.pos += 20 if entry[18:20] in (b"\r\n", b" \n", b" \r") else len(m.group(0))
                lexer._skip_ws()
        trailer = _parse_object(lexer)
        if not isinstance(trailer, dict):
            raise MalformedPdf("trailer is not a dictionary")
        for key, value in trailer.items():
            self.trailer.setdefault(key, value)
        prev = trailer.get("Prev")
        return int(prev) if isinstance(prev, (int, float)) else None

    def resolve(self, obj, depth: int = 0):
        while isinstance(obj, _Ref):
            if depth > MAX_RESOLVE_DEPTH:
                raise MalformedPdf("indirect reference cycle")
            obj = self._load_object(obj.num)
            depth += 1
        return obj

    def _load_object(self, num: int):
        if num in self._cache:
            return self._cache[num]
        offset = self.offsets.get(num)
        if offset is None or not (0 <= offset < len(self.data)):
            raise MalformedPdf(f"object {num} missing from xref table")
        lexer = _Lexer(self.data, offset)
        onum, ogen, kw = lexer.next_token(), lexer.next_token(), lexer.next_token()
        if not (isinstance(onum, int) and isinstance(ogen, int) and kw == "obj"):
            raise MalformedPdf(f"object {num}: header not found at xref offset {offset}")
        if onum != num:
            raise MalformedPdf(f"object {num}: xref points at object {onum}")
        obj = _parse_object(lexer)
        save = lexer.pos
        nxt = lexer.next_token()
        if isinstance(nxt, _Keyword) and nxt == "stream":
            obj = ("__stream__", obj, self._read_stream(obj, lexer.pos))
        else:
            lexer.pos = save
        self._cache[num] = obj
        return obj

    def _read_stream(self, sdict, pos: int) -> bytes:
        if not isinstance(sdict, dict):
            raise MalformedPdf("stream without dictionary")
        data = self.data
        if data.startswith(b"\r\n", pos):
            pos += 2
        elif data.startswith(b"\n", pos) or data.startswith(b"\r", pos):
            pos += 1
        length = self.resolve(sdict.get("Length"))
        if not isinstance(length, (int, float)) or length < 0 or pos + int(length) > len(data):
            raise MalformedPdf("stream /Length invalid")
        raw = data[pos : pos + int(length)]
        tail = data[pos + int(length) : pos + int(length) + 20]
        if b"endstream" not in tail:
            raise MalformedPdf("stream not terminated by endstream at /Length")
        return self._decode_stream(sdict, raw)

    def _decode_stream(self, sdict: dict, raw: bytes) -> bytes:
        filt = self.resolve(sdict.get("Filter"))
        if filt is None:
            return raw
        if isinstance(filt, list):
            filters = [self.resolve(f) for f in filt]
        else:
            filters = [filt]
        out = raw
        for f in filters:
            if not isinstance(f, _Name) or str(f) != "FlateDecode":
                raise UnsupportedFeature(f"stream filter {f!r}")
            if "DecodeParms" in sdict and self.resolve(sdict["DecodeParms"]) is not None:
                raise UnsupportedFeature("FlateDecode predictor parameters")
            try:
                dec = zlib.decompressobj()
                out = dec.decompress(out, MAX_INFLATE_BYTES)
                if dec.unconsumed_tail:
                    raise MalformedPdf("stream inflates beyond size cap")
            except zlib.error as exc:
                raise MalformedPdf(f"corrupt Flate stream: {exc}") from exc
        return out

    def stream_data(self, obj) -> bytes:
        obj = self.resolve(obj)
        if isinstance(obj, tuple) and obj[0] == "__stream__":
            return obj[2]
        raise MalformedPdf("expected a stream object")


def _walk_pages(pdf: _PdfFile, node, inherited: dict, out: list, depth: int = 0):
    if depth > 64:
        raise MalformedPdf("page tree too deep")
    node = pdf.resolve(node)
    if not isinstance(node, dict):
        raise MalformedPdf("page tree node is not a dictionary")
    attrs = dict(inherited)
    for key in ("MediaBox", "Resources"):
        if key in node:
            attrs[key] = node[key]
    ntype = pdf.resolve(node.get("Type"))
    if str(ntype) == "Pages" or "Kids" in node:
        kids = pdf.resolve(node.get("Kids"))
        if not isinstance(kids, list):
            raise MalformedPdf("/Pages node without /Kids array")
        for kid in kids:
            _walk_pages(pdf, kid, attrs, out, depth + 1)
            if len(out) > MAX_PAGES:
                raise MalformedPdf("too many pages")
    elif str(ntype) == "Page":
        out.append((node, attrs))
    else:
        raise MalformedPdf(f"unexpected page tree node type {ntype!r}")


def _load_font(pdf: _PdfFile, fdict) -> _Font:
    fdict = pdf.resolve(fdict)
    if not isinstance(fdict, dict):
        raise MalformedPdf("font resource is not a dictionary")
    subtype = str(pdf.resolve(fdict.get("Subtype", "")))
    if subtype == "Type0":
        raise UnsupportedFeature("composite (Type0/CID) font")
    if subtype not in ("Type1", "TrueType", "MMType1"):
        raise UnsupportedFeature(f"font subtype {subtype!r}")
    enc = pdf.resolve(fdict.get("Encoding"))
    if enc is None:
        encoding = "builtin"
    elif isinstance(enc, _Name) and str(enc) == "WinAnsiEncoding":
        encoding = "winansi"
    elif isinstance(enc, _Name):
        raise UnsupportedFeature(f"font encoding {str(enc)!r}")
    else:
        raise UnsupportedFeature("font /Encoding dictionary with Differences")
    base = str(pdf.resolve(fdict.get("BaseFont", "Helvetica")))
    if "+" in base:
        base = base.split("+", 1)[1]
    first_char = pdf.resolve(fdict.get("FirstChar"))
    widths_obj = pdf.resolve(fdict.get("Widths"))
    widths = None
    if isinstance(widths_obj, list) and isinstance(first_char, int):
        widths = [float(pdf.resolve(w)) for w in widths_obj]
    return _Font(encoding=encoding, base_font=base, first_char=first_char if widths else None, widths=widths)


_TEXT_OPS = {"Tf", "Td", "TD", "Tm", "T*", "Tj", "TJ"}


class _TextInterpreter:
    """Executes the supported text operators of one page's content."""

    def __init__(self, pdf: _PdfFile, resources: dict, config: ParserConfig):
        self.pdf = pdf
        self.config = config
        self.fonts: dict[str, _Font] = {}
        res = pdf.resolve(resources) if resources else {}
        self.font_dicts = pdf.resolve(res.get("Font")) if isinstance(res, dict) else {}
        if self.font_dicts is None:
            self.font_dicts = {}
        self.runs: list[_Run] = []
        self.in_text = False
        self.font: _Font | None = None
        self.size = 0.0
        self.tm = None  # (a, d, e, f), with b = c = 0 enforced
        self.tlm = None
        self.leading = 0.0

    def run(self, content: bytes):
        lexer = _Lexer(content)
        stack: list = []
        while True:
            token = lexer.next_token()
            if token is None:
                break
            if isinstance(token, _Keyword) and token not in ("<<", "[", "]", ">>"):
                self._execute(str(token), stack)
                stack.clear()
            else:
                stack.append(_parse_from_token(lexer, token, 0))
                if len(stack) > 128:
                    raise MalformedPdf("operand stack overflow in content stream")
        if self.in_text:
            raise MalformedPdf("content stream ends inside BT/ET")

    def _num(self, value) -> float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MalformedPdf(f"expected number operand, got {value!r}")
        return float(value)

    def _execute(self, op: str, stack: list):
        if op == "BT":
            if self.in_text:
                raise MalformedPdf("nested BT")
            self.in_text = True
            self.tm = self.tlm = (1.0, 1.0, 0.0, 0.0)
            return
        if op == "ET":
            if not self.in_text:
                raise MalformedPdf("ET without BT")
            self.in_text = False
            return
        if op in _TEXT_OPS:
            if not self.in_text and op not in ("Tf",):
                raise MalformedPdf(f"text operator {op} outside BT/ET")
            getattr(self, "_op_" + op.replace("*", "star"))(stack)
            return
        raise UnsupportedFeature(f"content operator {op!r}")

    def _op_Tf(self, stack):
        if len(stack) < 2 or not isinstance(stack[-2], _Name):
            raise MalformedPdf("Tf needs a font name and size")
        name = str(stack[-2])
        size = self._num(stack[-1])
        if name not in self.fonts:
            fdict = self.font_dicts.get(name) if isinstance(self.font_dicts, dict) else None
            if fdict is None:
                raise MalformedPdf(f"Tf references unknown font {name!r}")
            self.fonts[name] = _load_font(self.pdf, fdict)
        self.font = self.fonts[name]
        self.size = size

    def _move(self, tx: float, ty: float):
        a, d, e, f = self.tlm
        self.tlm = (a, d, e + tx * a, f + ty * d)
        self.tm = self.tlm

    def _op_Td(self, stack):
        if len(stack) < 2:
            raise MalformedPdf("Td needs two operands")
        self._move(self._num(stack[-2]), self._num(stack[-1]))

    def _op_TD(self, stack):
        if len(stack) < 2:
            raise MalformedPdf("TD needs two operands")
        ty = self._num(stack[-1])
        self.leading = -ty
        self._move(self._num(stack[-2]), ty)

    def _op_Tm(self, stack):
        if len(stack) < 6:
            raise MalformedPdf("Tm needs six operands")
        a, b, c, d, e, f = (self._num(v) for v in stack[-6:])
        if b != 0.0 or c != 0.0:
            raise UnsupportedFeature("rotated or skewed text (Tm with b/c != 0)")
        if a <= 0.0 or d <= 0.0:
            raise UnsupportedFeature("mirrored or degenerate text matrix")
        self.tlm = self.tm = (a, d, e, f)

    def _op_Tstar(self, stack):
        self._move(0.0, -self.leading)

    def _op_Tj(self, stack):
        if not stack or not isinstance(stack[-1], bytes):
            raise MalformedPdf("Tj needs a string operand")
        self._show(stack[-1])

    def _op_TJ(self, stack):
        if not stack or not isinstance(stack[-1], list):
            raise MalformedPdf("TJ needs an array operand")
        for item in stack[-1]:
            if isinstance(item, bytes):
                self._show(item)
            elif isinstance(item, (int, float)):
                a, d, e, f = self.tm
                self.tm = (a, d, e - float(item) / 1000.0 * self.size * a, f)
            else:
                raise MalformedPdf(f"TJ array holds {item!r}")

    def _show(self, raw: bytes):
        if self.font is None:
            raise MalformedPdf("text shown before any Tf")
        a, d, e, f = self.tm
        x0 = e
        chars = []
        for code in raw:
            ch = self.font.decode_byte(code)
            chars.append(ch)
            e += self.font.glyph_width(code, ch) / 1000.0 * self.size * a
        self.tm = (a, d, e, f)
        if chars:
            self.runs.append(_Run(x0=x0, x1=e, baseline=f, size=self.size * d, text="".join(chars)))


def _assemble_lines(runs: list[_Run], page_idx: int, geom: PageGeometry, config: ParserConfig) -> list[LineBox]:
    accs: list[_LineAcc] = []
    for run in runs:
        run_top = run.baseline + config.ascent * run.size
        run_bottom = run.baseline - config.descent * run.size
        target = None
        for acc in accs:
            ref = max(acc.size, run.size)
            if abs(run.baseline - acc.baseline) > config.baseline_tol * ref:
                continue
            gap = run.x0 - acc.x1
            if -config.overlap_tol * ref <= gap <= config.max_gap * ref:
                target = acc
                break
        if target is None:
            accs.append(
                _LineAcc(x0=run.x0, x1=run.x1, top=run_top, bottom=run_bottom,
                         baseline=run.baseline, size=run.size, text=run.text)
            )
            continue
        gap = run.x0 - target.x1
        joiner = ""
        if gap > config.space_gap * max(target.size, run.size) and not target.text.endswith(" ") and not run.text.startswith(" "):
            joiner = " "
        target.text += joiner + run.text
        target.x0 = min(target.x0, run.x0)
        target.x1 = max(target.x1, run.x1)
        target.top = max(target.top, run_top)
        target.bottom = min(target.bottom, run_bottom)
        target.size = max(target.size, run.size)

    lines = []
    for acc in accs:
        if not acc.text.strip():
            continue
        x0 = min(max(acc.x0, 0.0), geom.width)
        x1 = min(max(acc.x1, x0), geom.width)
        y0 = min(max(geom.height - acc.top, 0.0), geom.height)
        y1 = min(max(geom.height - acc.bottom, y0), geom.height)
        lines.append(LineBox(page=page_idx, x0=x0, y0=y0, x1=x1, y1=y1, text=acc.text))
    return lines


def parse_pdf(data: bytes, doc_id: str = "doc", config: ParserConfig | None = None) -> Document:
    """Parse subset-PDF bytes into a Document of positioned text lines.

    Raises UnsupportedFeature for constructs outside the subset and
    MalformedPdf for structural violations; never returns partial content.
    """
    config = config or ParserConfig()
    try:
        return _parse(data, doc_id, config)
    except (UnsupportedFeature, MalformedPdf):
        raise
    except RecursionError as exc:
        raise MalformedPdf("structure nesting exceeds limits") from exc
    except Exception as exc:  # defensive: corrupt input must yield a typed error
        raise MalformedPdf(f"unparseable structure: {type(exc).__name__}: {exc}") from exc


def _parse(data: bytes, doc_id: str, config: ParserConfig) -> Document:
    pdf = _PdfFile(data)
    catalog = pdf.resolve(pdf.trailer.get("Root"))
    if not isinstance(catalog, dict):
        raise MalformedPdf("/Root is not a dictionary")
    pages_root = catalog.get("Pages")
    if pages_root is None:
        raise MalformedPdf("catalog has no /Pages")
    flat: list[tuple[dict, dict]] = []
    _walk_pages(pdf, pages_root, {}, flat)

    doc = Document(doc_id)
    for page_idx, (node, attrs) in enumerate(flat):
        media = pdf.resolve(attrs.get("MediaBox"))
        if not (isinstance(media, list) and len(media) == 4):
            raise MalformedPdf(f"page {page_idx}: missing /MediaBox")
        mb = [float(pdf.resolve(v)) for v in media]
        if mb[0] != 0.0 or mb[1] != 0.0:
            raise UnsupportedFeature("nonzero MediaBox origin")
        if mb[2] <= 0 or mb[3] <= 0:
            raise MalformedPdf(f"page {page_idx}: degenerate MediaBox {mb}")
        geom = PageGeometry(mb[2], mb[3])

        contents = node.get("Contents")
        content_data = b""
        if contents is not None:
            resolved = pdf.resolve(contents)
            if isinstance(resolved, list):
                content_data = b"\n".join(pdf.stream_data(part) for part in resolved)
            else:
                content_data = pdf.stream_data(contents)

        interp = _TextInterpreter(pdf, attrs.get("Resources"), config)
        interp.run(content_data)
        lines = _assemble_lines(interp.runs, page_idx, geom, config)
        doc.pages.append(Page(geom, lines))

    doc.validate()
    return doc
