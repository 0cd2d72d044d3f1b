"""End-to-end extraction metrics: detection quality weighted by structure quality.

Each matched prediction contributes its structure score instead of a flat
count of 1, so a found-but-garbled table earns partial credit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .detection import PRPoint, _prf, average_precision, confidence_sweep
from .matching import GroundTruth, MatchConfig, Prediction


@dataclass(frozen=True)
class ScoredPair:
    """A matched prediction: its match quality and its structure score."""

    similarity: float
    score: float


def tsr_given_td(pairs: Sequence[ScoredPair]) -> float | None:
    """Mean structure score over matched predictions; None when nothing matched.

    None is deliberate: recognition quality on zero found tables is not a
    zero, it is not measurable.
    """
    if not pairs:
        return None
    return math.fsum(p.score for p in pairs) / len(pairs)


def te_precision_recall(pairs: Sequence[ScoredPair], n_pos: int, n_gt: int,
                        theta_j: float = 0.5) -> tuple[float, float, float]:
    """Structure-weighted precision/recall/F1.

    Each pair whose match quality strictly exceeds theta_j contributes its
    structure score; division conventions follow the detection metrics.
    """
    weight = math.fsum(p.score for p in pairs if p.similarity > theta_j)
    return _prf(weight, n_pos, n_gt)


def te_sweep(pages: Sequence[tuple[list[Prediction], list[GroundTruth]]],
             cfg: MatchConfig,
             pair_score) -> list[PRPoint]:
    """Confidence sweep with structure-weighted points.

    pair_score(page, pred, gt) supplies the structure score of a matched
    pair; scores for pairs formed at any cutoff are needed, so callers
    usually pass a memoized function.
    """
    return confidence_sweep(pages, cfg, pair_score=pair_score)


def te_average_precision(pages: Sequence[tuple[list[Prediction], list[GroundTruth]]],
                         cfg: MatchConfig,
                         pair_score) -> float:
    """Area under the structure-weighted precision/recall sweep."""
    return average_precision(te_sweep(pages, cfg, pair_score))
