"""JSONL interchange format for documents.

One JSON object per line, UTF-8. A document's page records appear before any
of its line records:

    {"type":"page","doc_id":str,"page":int,"width":float,"height":float}
    {"type":"line","doc_id":str,"page":int,"x0":float,"y0":float,"x1":float,
     "y1":float,"text":str,"label":str|null}

Unknown keys are ignored on read. Serialization is deterministic, so writing
a document read back from its own output reproduces the bytes exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .document import Document, LineBox, LineLabel, Page

_LABEL_NAMES = {lab.value for lab in LineLabel}


class SchemaError(Exception):
    """A JSONL record violates the interchange schema."""

    def __init__(self, lineno: int, field: str, message: str):
        self.lineno = lineno
        self.field = field
        super().__init__(f"line {lineno}, field {field!r}: {message}")


def _require(record: dict, key: str, types, lineno: int):
    if key not in record:
        raise SchemaError(lineno, key, "missing required field")
    value = record[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise SchemaError(lineno, key, f"expected {types}, got {type(value).__name__}")
    return value


def iter_jsonl(path: str | Path) -> Iterator[Document]:
    """Yield documents from a JSONL file, in file order."""
    seen_ids: set[str] = set()
    current: Document | None = None

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(lineno, "-", f"invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise SchemaError(lineno, "-", "record is not a JSON object")
            rtype = _require(record, "type", str, lineno)
            doc_id = _require(record, "doc_id", str, lineno)

            if current is None or doc_id != current.doc_id:
                if doc_id in seen_ids:
                    raise SchemaError(lineno, "doc_id", f"document {doc_id!r} records are not contiguous")
                if current is not None:
                    yield current
                seen_ids.add(doc_id)
                current = Document(doc_id)

            if rtype == "page":
                page_idx = _require(record, "page", int, lineno)
                if page_idx != len(current.pages):
                    raise SchemaError(lineno, "page", f"expected page {len(current.pages)}, got {page_idx}")
                width = float(_require(record, "width", (int, float), lineno))
                height = float(_require(record, "height", (int, float), lineno))
                if width <= 0 or height <= 0:
                    raise SchemaError(lineno, "width", f"non-positive page dimensions {width}x{height}")
                from .document import PageGeometry

                current.pages.append(Page(PageGeometry(width, height)))
            elif rtype == "line":
                page_idx = _require(record, "page", int, lineno)
                if not (0 <= page_idx < len(current.pages)):
                    raise SchemaError(lineno, "page", f"line references page {page_idx} before its page record")
                coords = {k: float(_require(record, k, (int, float), lineno)) for k in ("x0", "y0", "x1", "y1")}
                text = _require(record, "text", str, lineno)
                if not text.strip():
                    raise SchemaError(lineno, "text", "empty or whitespace-only text")
                label_raw = record.get("label")
                if label_raw is None:
                    label = None
                elif isinstance(label_raw, str) and label_raw in _LABEL_NAMES:
                    label = LineLabel(label_raw)
                else:
                    raise SchemaError(lineno, "label", f"unknown label {label_raw!r}")
                line = LineBox(page=page_idx, text=text, label=label, **coords)
                geom = current.pages[page_idx].geometry
                if not (0 <= line.x0 <= line.x1 <= geom.width):
                    raise SchemaError(lineno, "x0", f"x range [{line.x0}, {line.x1}] outside page width {geom.width}")
                if not (0 <= line.y0 <= line.y1 <= geom.height):
                    raise SchemaError(lineno, "y0", f"y range [{line.y0}, {line.y1}] outside page height {geom.height}")
                current.pages[page_idx].lines.append(line)
            else:
                raise SchemaError(lineno, "type", f"unknown record type {rtype!r}")

    if current is not None:
        yield current


def read_jsonl(path: str | Path) -> Document:
    """Read a single-document JSONL file.

    Raises SchemaError if the file is empty or contains more than one document.
    """
    docs = read_corpus(path)
    if not docs:
        raise SchemaError(0, "type", "file contains no records; a leading page record is mandatory")
    if len(docs) > 1:
        raise SchemaError(0, "doc_id", f"expected a single document, found {len(docs)}")
    return docs[0]


def read_corpus(path: str | Path) -> list[Document]:
    return list(iter_jsonl(path))


def _page_record(doc_id: str, idx: int, page: Page) -> str:
    return json.dumps(
        {"type": "page", "doc_id": doc_id, "page": idx, "width": page.geometry.width, "height": page.geometry.height},
        ensure_ascii=False,
        separators=(",", ":"),
    )


def _line_record(doc_id: str, line: LineBox) -> str:
    return json.dumps(
        {
            "type": "line",
            "doc_id": doc_id,
            "page": line.page,
            "x0": line.x0,
            "y0": line.y0,
            "x1": line.x1,
            "y1": line.y1,
            "text": line.text,
            "label": line.label.value if line.label is not None else None,
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def dump_document(doc: Document) -> str:
    parts = []
    for idx, page in enumerate(doc.pages):
        parts.append(_page_record(doc.doc_id, idx, page))
    for page in doc.pages:
        for line in page.lines:
            parts.append(_line_record(doc.doc_id, line))
    return "\n".join(parts) + ("\n" if parts else "")


def write_jsonl(doc: Document, path: str | Path) -> None:
    Path(path).write_text(dump_document(doc), encoding="utf-8")


def write_corpus(docs: Iterable[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(dump_document(doc))
