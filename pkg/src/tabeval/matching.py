"""Pairing predicted tables with ground truth on a page."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .geometry import BBox, iou
from .model import TableGrid, grid_entries_content


class ModeMismatchError(ValueError):
    """An input lacks the field the similarity mode needs."""


class CorpusMismatchError(ValueError):
    """Two match sets do not describe the same predictions and ground truth."""


@dataclass(frozen=True)
class Prediction:
    """One predicted table: a box, a parsed grid, or both."""

    bbox: BBox | None = None
    table: TableGrid | None = None
    confidence: float = 1.0


@dataclass(frozen=True)
class GroundTruth:
    """One annotated table."""

    bbox: BBox | None = None
    table: TableGrid | None = None


@dataclass(frozen=True)
class MatchConfig:
    mode: str = "bbox"  # bbox | content
    theta_j: float = 0.5
    theta_c: float | None = None  # None keeps every prediction

    def __post_init__(self) -> None:
        if self.mode not in ("bbox", "content"):
            raise ValueError(f"unknown similarity mode: {self.mode!r}")


@dataclass(frozen=True)
class MatchPair:
    pred_index: int
    gt_index: int
    similarity: float


@dataclass(frozen=True)
class MatchSet:
    """Outcome of matching: pairs plus leftover indices on both sides."""

    pairs: tuple[MatchPair, ...]
    false_positives: tuple[int, ...]
    false_negatives: tuple[int, ...]
    n_gt: int

    @property
    def n_positive(self) -> int:
        return len(self.pairs) + len(self.false_positives)


def threshold_positives(preds: list[Prediction], theta_c: float) -> list[Prediction]:
    """Predictions whose confidence strictly exceeds theta_c."""
    return [p for p in preds if p.confidence > theta_c]


def content_chunks(text: str) -> list[str]:
    """Split text into consecutive 2-character chunks.

    All whitespace is removed first. An odd trailing character becomes a
    1-character chunk.
    """
    squeezed = "".join(ch for ch in text if not ch.isspace())
    return [squeezed[i:i + 2] for i in range(0, len(squeezed), 2)]


def content_chunk_pairs(table: TableGrid) -> list[tuple[str, str]]:
    """Overlapping pairs of consecutive chunks of a table's flattened text.

    Cell text is concatenated in row-major cell order, so pairs cross cell
    boundaries; that keeps the signal sensitive to cell order as well as
    content.
    """
    joined = "".join(
        cell.content for cell in sorted(table.cells, key=lambda c: (c.row, c.col))
    )
    chunks = content_chunks(joined)
    return [(chunks[i], chunks[i + 1]) for i in range(len(chunks) - 1)]


def content_jaccard(a: TableGrid, b: TableGrid) -> float:
    """Multiset Jaccard overlap of chunk-pair streams of two tables.

    1.0 when both streams are empty, 0.0 when exactly one is.
    """
    ca = Counter(content_chunk_pairs(a))
    cb = Counter(content_chunk_pairs(b))
    if not ca and not cb:
        return 1.0
    if not ca or not cb:
        return 0.0
    inter = sum((ca & cb).values())
    union = sum((ca | cb).values())
    return inter / union


def _similarity(pred: Prediction, gt: GroundTruth, mode: str) -> float:
    if mode == "bbox":
        if pred.bbox is None:
            raise ModeMismatchError("bbox mode needs a box on every prediction")
        if gt.bbox is None:
            raise ModeMismatchError("bbox mode needs a box on every ground-truth table")
        return iou(pred.bbox, gt.bbox)
    if gt.table is None:
        raise ModeMismatchError("content mode needs markup on every ground-truth table")
    if pred.table is None:
        # A prediction without a parseable table cannot match anything.
        return 0.0
    return content_jaccard(pred.table, gt.table)


def match(preds: list[Prediction], gts: list[GroundTruth], cfg: MatchConfig) -> MatchSet:
    """Greedy one-to-one matching by descending similarity.

    Candidate pairs are those whose similarity strictly exceeds theta_j.
    Ties break by higher confidence, then by prediction order, so the result
    is deterministic. Unmatched predictions are false positives; unmatched
    ground truth, false negatives.
    """
    candidates = []
    for i, pred in enumerate(preds):
        for j, gt in enumerate(gts):
            sim = _similarity(pred, gt, cfg.mode)
            if sim > cfg.theta_j:
                candidates.append((-sim, -pred.confidence, i, j))
    candidates.sort()
    pred_used = [False] * len(preds)
    gt_used = [False] * len(gts)
    pairs = []
    for neg_sim, _, i, j in candidates:
        if pred_used[i] or gt_used[j]:
            continue
        pred_used[i] = True
        gt_used[j] = True
        pairs.append(MatchPair(i, j, -neg_sim))
    return MatchSet(
        pairs=tuple(pairs),
        false_positives=tuple(i for i, used in enumerate(pred_used) if not used),
        false_negatives=tuple(j for j, used in enumerate(gt_used) if not used),
        n_gt=len(gts),
    )


def content_classifier_report(matches_bbox: MatchSet, matches_content: MatchSet) -> tuple[float, float]:
    """Score content matching as a TP/FP classifier against bbox matching.

    Treats the bbox match outcome as truth for which predictions are true
    positives and reports the precision and recall of the content outcome
    on that task.
    """
    if (matches_bbox.n_gt != matches_content.n_gt
            or matches_bbox.n_positive != matches_content.n_positive):
        raise CorpusMismatchError("match sets describe different inputs")
    truth = {p.pred_index for p in matches_bbox.pairs}
    called = {p.pred_index for p in matches_content.pairs}
    agree = len(truth & called)
    if not called:
        precision = 1.0 if not truth else 0.0
    else:
        precision = agree / len(called)
    if not truth:
        recall = 1.0 if not called else 0.0
    else:
        recall = agree / len(truth)
    return precision, recall
