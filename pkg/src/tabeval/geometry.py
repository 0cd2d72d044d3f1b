"""Bounding-box arithmetic and token-based page heuristics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TypeVar

T = TypeVar("T")


class InsufficientEvidenceError(ValueError):
    """Raised when a heuristic has no data to decide on."""


@dataclass(frozen=True)
class BBox:
    """Axis-aligned rectangle in pixel coordinates, corners (x0, y0) and (x1, y1)."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValueError(f"degenerate box: ({self.x0}, {self.y0}, {self.x1}, {self.y1})")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0

    def contains_point(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def intersection_area(self, other: "BBox") -> float:
        w = min(self.x1, other.x1) - max(self.x0, other.x0)
        h = min(self.y1, other.y1) - max(self.y0, other.y0)
        if w <= 0.0 or h <= 0.0:
            return 0.0
        return w * h

    def padded(self, pad: float, page_width: float | None = None,
               page_height: float | None = None) -> "BBox":
        """Grow the box by `pad` on every side, clipped to the page when given."""
        x0, y0 = self.x0 - pad, self.y0 - pad
        x1, y1 = self.x1 + pad, self.y1 + pad
        if page_width is not None:
            x0, x1 = max(0.0, x0), min(page_width, x1)
        if page_height is not None:
            y0, y1 = max(0.0, y0), min(page_height, y1)
        return BBox(x0, y0, x1, y1)


@dataclass(frozen=True)
class Token:
    """A word on the page together with its box."""

    bbox: BBox
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("token text must be non-empty")


def iou(a: BBox, b: BBox) -> float:
    """Intersection area over union area; 0 when the union is degenerate."""
    inter = a.intersection_area(b)
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def nms(boxes: Sequence[tuple[BBox, float]], iou_threshold: float) -> list[tuple[BBox, float]]:
    """Greedy non-maximum suppression.

    Repeatedly keeps the most confident remaining box and discards every
    other box whose IoU with it exceeds `iou_threshold`. Ties in confidence
    are resolved by input order, so the result is deterministic.

    Args:
        boxes: (box, confidence) pairs, confidence in [0, 1].
        iou_threshold: overlap above which the lower-confidence box is dropped.

    Returns:
        The retained (box, confidence) pairs, most confident first.
    """
    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i][1], i))
    kept: list[tuple[BBox, float]] = []
    suppressed = [False] * len(boxes)
    for pos, i in enumerate(order):
        if suppressed[i]:
            continue
        kept.append(boxes[i])
        for j in order[pos + 1:]:
            if not suppressed[j] and iou(boxes[i][0], boxes[j][0]) > iou_threshold:
                suppressed[j] = True
    return kept


def top_k(boxes: Sequence[tuple[BBox, float]], k: int) -> list[tuple[BBox, float]]:
    """The k most confident (box, confidence) pairs, most confident first."""
    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i][1], i))
    return [boxes[i] for i in order[:max(0, k)]]


def filter_empty(predictions: Iterable[T], tokens: Sequence[Token]) -> list[T]:
    """Drop predictions whose box contains no token center.

    Each prediction is either a BBox or a tuple whose first element is one;
    order is preserved.
    """
    centers = [t.bbox.center for t in tokens]
    kept = []
    for pred in predictions:
        box = pred[0] if isinstance(pred, tuple) else pred
        if any(box.contains_point(cx, cy) for cx, cy in centers):
            kept.append(pred)
    return kept


def detect_rotation(tokens_in_box: Sequence[Token]) -> str:
    """Classify a region as 'upright' or 'rotated' from mean token shape.

    Words are typically wider than tall, so a mean width/height ratio of at
    least 1 reads as upright.
    """
    if not tokens_in_box:
        raise InsufficientEvidenceError("no tokens to estimate orientation from")
    mean_w = sum(t.bbox.width for t in tokens_in_box) / len(tokens_in_box)
    mean_h = sum(t.bbox.height for t in tokens_in_box) / len(tokens_in_box)
    if mean_h <= 0.0:
        return "upright"
    return "upright" if mean_w / mean_h >= 1.0 else "rotated"
