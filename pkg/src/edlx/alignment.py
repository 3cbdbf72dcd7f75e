"""Alignment of annotated bounding boxes onto extracted lines.

Each line takes the label of the annotation box that covers the largest
fraction of the line's own area. Lines nothing covers well fall back to
the catch-all `others` label.
"""

from __future__ import annotations

from typing import Sequence

from .document import Document, LineBox, LineLabel

# A line must have at least half its area inside a box to take its label.
MIN_OVERLAP_RATIO = 0.5

AnnotationBox = tuple[int, float, float, float, float, LineLabel]


def _intersection_area(line: LineBox, box: AnnotationBox) -> float:
    _, bx0, by0, bx1, by1, _ = box
    w = min(line.x1, bx1) - max(line.x0, bx0)
    h = min(line.y1, by1) - max(line.y0, by0)
    if w <= 0 or h <= 0:
        return 0.0
    return w * h


def best_label(line: LineBox, boxes: Sequence[AnnotationBox]) -> LineLabel:
    """Label of the box maximizing intersection-over-line-area; ties go to the
    smallest box; below MIN_OVERLAP_RATIO the fallback is `others`."""
    line_area = (line.x1 - line.x0) * (line.y1 - line.y0)
    if line_area <= 0:
        return LineLabel.OTHERS
    best: tuple[float, float, LineLabel] | None = None
    for box in boxes:
        if box[0] != line.page:
            continue
        ratio = _intersection_area(line, box) / line_area
        box_area = (box[3] - box[1]) * (box[4] - box[2])
        # maximize ratio, then minimize box area
        key = (ratio, -box_area)
        if best is None or key > (best[0], -best[1]):
            best = (ratio, box_area, box[5])
    if best is None or best[0] < MIN_OVERLAP_RATIO:
        return LineLabel.OTHERS
    return best[2]


def align_labels(doc: Document, boxes: Sequence[AnnotationBox]) -> Document:
    """Return a copy of `doc` where every line carries exactly one label."""
    labels = [best_label(line, boxes) for line in doc.iter_lines()]
    return doc.relabeled(labels)
