"""Core document model: pages, positioned text lines, layout labels.

Coordinates are in PDF points with a top-left origin: x grows rightward,
y grows downward. A page's content therefore reads top-down as ascending y.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator


class LineLabel(str, Enum):
    """The eight layout roles a line can take.

    Enumeration order is the canonical label order: it defines class ids for
    the classifier and the tie-break order for argmax predictions.
    """

    BODY = "body"
    FOOTER = "footer"
    HEADER = "header"
    LEFT_NOTE = "left_note"
    PAGE = "page"
    OTHERS = "others"
    SIGNATURE = "signature"
    TITLE = "title"


LABELS: tuple[LineLabel, ...] = tuple(LineLabel)
LABEL_TO_ID: dict[LineLabel, int] = {lab: i for i, lab in enumerate(LABELS)}
N_LABELS = len(LABELS)


@dataclass(frozen=True)
class PageGeometry:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"page dimensions must be positive, got {self.width}x{self.height}")


@dataclass(frozen=True)
class LineBox:
    """One visual text line: its page, bounding box and text content."""

    page: int
    x0: float
    y0: float
    x1: float
    y1: float
    text: str
    label: LineLabel | None = None

    def with_label(self, label: LineLabel | None) -> "LineBox":
        return replace(self, label=label)

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))


@dataclass
class Page:
    geometry: PageGeometry
    lines: list[LineBox] = field(default_factory=list)


@dataclass
class Document:
    """An ordered collection of pages with their text lines.

    Line order within a page is the parser's emission order; nothing is
    sorted at ingest. Treat instances as immutable once constructed.
    """

    doc_id: str
    pages: list[Page] = field(default_factory=list)

    def iter_lines(self) -> Iterator[LineBox]:
        for page in self.pages:
            yield from page.lines

    @property
    def n_lines(self) -> int:
        return sum(len(p.lines) for p in self.pages)

    def line_list(self) -> list[LineBox]:
        return list(self.iter_lines())

    def validate(self) -> None:
        """Check every invariant; raise ValueError naming the first violation."""
        for pi, page in enumerate(self.pages):
            geom = page.geometry
            for li, line in enumerate(page.lines):
                where = f"doc {self.doc_id!r} page {pi} line {li}"
                if line.page != pi:
                    raise ValueError(f"{where}: page index {line.page} does not match its page {pi}")
                if not (line.x0 <= line.x1):
                    raise ValueError(f"{where}: x0 {line.x0} > x1 {line.x1}")
                if not (line.y0 <= line.y1):
                    raise ValueError(f"{where}: y0 {line.y0} > y1 {line.y1}")
                if line.x0 < 0 or line.x1 > geom.width:
                    raise ValueError(f"{where}: x range [{line.x0}, {line.x1}] outside page width {geom.width}")
                if line.y0 < 0 or line.y1 > geom.height:
                    raise ValueError(f"{where}: y range [{line.y0}, {line.y1}] outside page height {geom.height}")
                if not line.text.strip():
                    raise ValueError(f"{where}: text is empty or whitespace-only")

    def relabeled(self, labels: list[LineLabel | None]) -> "Document":
        """Copy of the document with per-line labels replaced, in line order."""
        if len(labels) != self.n_lines:
            raise ValueError(f"expected {self.n_lines} labels, got {len(labels)}")
        it = iter(labels)
        pages = [Page(p.geometry, [ln.with_label(next(it)) for ln in p.lines]) for p in self.pages]
        return Document(self.doc_id, pages)
