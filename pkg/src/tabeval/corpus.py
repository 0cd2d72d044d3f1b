"""JSON Lines corpus loading and validation.

One line per page:

    {"page_id": "p1", "width": 1000, "height": 1400,
     "ground_truth": [{"bbox": [x0, y0, x1, y1], "markup": "<table>..."}],
     "predictions": [{"bbox": [...], "markup": "...", "confidence": 0.9}],
     "tokens": [{"bbox": [...], "text": "word"}]}

Every table needs at least one of bbox and markup; prediction confidence
defaults to 1.0; tokens are optional. Unknown fields are ignored so corpora
can carry extra annotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .geometry import BBox, Token


class CorpusError(ValueError):
    """A corpus file violates the schema; the message names the line."""


@dataclass(frozen=True)
class TableRecord:
    """A table as stored in the corpus: optional box, optional raw markup."""

    bbox: BBox | None = None
    markup: str | None = None
    confidence: float = 1.0


@dataclass(frozen=True)
class CorpusRecord:
    """One page: its ground truth, predictions, and optional tokens."""

    page_id: str
    width: float
    height: float
    ground_truth: tuple[TableRecord, ...] = ()
    predictions: tuple[TableRecord, ...] = ()
    tokens: tuple[Token, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)


def _parse_bbox(value, where: str) -> BBox:
    if (not isinstance(value, (list, tuple)) or len(value) != 4
            or not all(isinstance(v, (int, float)) for v in value)):
        raise CorpusError(f"{where}: bbox must be [x0, y0, x1, y1]")
    try:
        return BBox(*map(float, value))
    except ValueError as exc:
        raise CorpusError(f"{where}: {exc}") from None


def _parse_table(obj, where: str, is_prediction: bool) -> TableRecord:
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: table entry must be an object")
    bbox = _parse_bbox(obj["bbox"], where) if obj.get("bbox") is not None else None
    markup = obj.get("markup")
    if markup is not None and not isinstance(markup, str):
        raise CorpusError(f"{where}: markup must be a string")
    if bbox is None and markup is None:
        raise CorpusError(f"{where}: table entry needs a bbox or markup")
    confidence = 1.0
    if is_prediction:
        raw = obj.get("confidence", 1.0)
        if not isinstance(raw, (int, float)) or not 0.0 <= float(raw) <= 1.0:
            raise CorpusError(f"{where}: confidence must be a number in [0, 1]")
        confidence = float(raw)
    return TableRecord(bbox=bbox, markup=markup, confidence=confidence)


def _parse_record(obj, line_no: int) -> CorpusRecord:
    where = f"line {line_no}"
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: each line must be a JSON object")
    page_id = obj.get("page_id")
    if not isinstance(page_id, str) or not page_id:
        raise CorpusError(f"{where}: page_id must be a non-empty string")
    try:
        width = float(obj["width"])
        height = float(obj["height"])
    except (KeyError, TypeError, ValueError):
        raise CorpusError(f"{where}: width and height must be numbers") from None
    if width <= 0 or height <= 0:
        raise CorpusError(f"{where}: page dimensions must be positive")

    warnings: list[str] = []
    page_box = BBox(0.0, 0.0, width, height)

    def load_tables(key: str, is_prediction: bool) -> tuple[TableRecord, ...]:
        raw = obj.get(key, [])
        if not isinstance(raw, list):
            raise CorpusError(f"{where}: {key} must be a list")
        tables = []
        for k, entry in enumerate(raw):
            table = _parse_table(entry, f"{where}: {key}[{k}]", is_prediction)
            if table.bbox is not None and not (
                    page_box.x0 <= table.bbox.x0 and table.bbox.x1 <= page_box.x1
                    and page_box.y0 <= table.bbox.y0 and table.bbox.y1 <= page_box.y1):
                warnings.append(f"{key}[{k}] bbox extends outside the page")
            tables.append(table)
        return tuple(tables)

    ground_truth = load_tables("ground_truth", is_prediction=False)
    predictions = load_tables("predictions", is_prediction=True)

    tokens = []
    raw_tokens = obj.get("tokens", [])
    if not isinstance(raw_tokens, list):
        raise CorpusError(f"{where}: tokens must be a list")
    for k, entry in enumerate(raw_tokens):
        if not isinstance(entry, dict) or not isinstance(entry.get("text"), str) or not entry["text"]:
            raise CorpusError(f"{where}: tokens[{k}] needs a bbox and non-empty text")
        tokens.append(Token(_parse_bbox(entry.get("bbox"), f"{where}: tokens[{k}]"), entry["text"]))

    return CorpusRecord(
        page_id=page_id,
        width=width,
        height=height,
        ground_truth=ground_truth,
        predictions=predictions,
        tokens=tuple(tokens),
        warnings=tuple(warnings),
    )


def read_corpus(lines: Iterable[str]) -> list[CorpusRecord]:
    """Parse corpus lines; blank lines are allowed and skipped."""
    records: list[CorpusRecord] = []
    seen: dict[str, int] = {}
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {line_no}: invalid JSON ({exc.msg})") from None
        record = _parse_record(obj, line_no)
        if record.page_id in seen:
            raise CorpusError(
                f"line {line_no}: duplicate page_id {record.page_id!r} "
                f"(first seen on line {seen[record.page_id]})"
            )
        seen[record.page_id] = line_no
        records.append(record)
    return records


def load_corpus(path: str | Path) -> list[CorpusRecord]:
    """Load a JSON Lines corpus file."""
    with open(path, "r", encoding="utf-8") as handle:
        return read_corpus(handle)
