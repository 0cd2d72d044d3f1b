"""Detection metrics: thresholded, confidence-swept, expected, and calibrated.

Division conventions, used everywhere a count can be zero: with no positive
predictions, precision is 1.0 if there is also no ground truth and 0.0
otherwise; recall mirrors that; F1 is 0.0 whenever precision + recall is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .matching import GroundTruth, MatchConfig, MatchSet, Prediction, match


@dataclass(frozen=True)
class PRPoint:
    theta_c: float
    precision: float
    recall: float


@dataclass(frozen=True)
class ReliabilityBin:
    lo: float
    hi: float
    count: int
    mean_confidence: float
    precision: float


@dataclass(frozen=True)
class ThresholdDensity:
    """Density alpha * theta on [s, 1] over the match quality an operator
    would still accept; s = 0 is lenient, s = 0.5 discounts weak matches."""

    s: float

    def __post_init__(self) -> None:
        if self.s not in (0.0, 0.5):
            raise ValueError(f"unsupported lower support bound: {self.s}")

    @property
    def alpha(self) -> float:
        return 2.0 / (1.0 - self.s * self.s)

    def pdf(self, theta: float) -> float:
        if self.s <= theta <= 1.0:
            return self.alpha * theta
        return 0.0

    def sample(self, u: float) -> float:
        """Inverse CDF: maps u in [0, 1] to a threshold draw."""
        return math.sqrt(u * (1.0 - self.s * self.s) + self.s * self.s)


def expected_indicator(j: float, density: ThresholdDensity) -> float:
    """Probability that a random acceptance threshold is below j.

    Closed form of the integral of the density from s to j: for s = 0 this
    is j squared, for s = 0.5 it is (4/3) * (j^2 - 1/4) once j clears 0.5.
    """
    if j <= density.s:
        return 0.0
    top = min(j, 1.0)
    return density.alpha * (top * top - density.s * density.s) / 2.0


def _prf(tp: float, n_pos: int, n_gt: int) -> tuple[float, float, float]:
    if n_pos == 0:
        precision = 1.0 if n_gt == 0 else 0.0
    else:
        precision = tp / n_pos
    if n_gt == 0:
        recall = 1.0 if n_pos == 0 else 0.0
    else:
        recall = tp / n_gt
    if precision + recall == 0.0:
        f1 = 0.0
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


def prf_at(matches: MatchSet) -> tuple[float, float, float]:
    """Precision, recall, and F1 of one match outcome."""
    return _prf(float(len(matches.pairs)), matches.n_positive, matches.n_gt)


def wavg_f1(f1_by_threshold: dict[float, float]) -> float:
    """F1 averaged over match thresholds, weighted by the threshold itself."""
    if not f1_by_threshold:
        raise ValueError("need at least one threshold")
    total = math.fsum(f1_by_threshold.keys())
    return math.fsum(t * f for t, f in f1_by_threshold.items()) / total


def expected_prf(j_values: Sequence[float], n_pos: int, n_gt: int,
                 density: ThresholdDensity) -> tuple[float, float, float]:
    """Expected precision/recall/F1 under a random acceptance threshold.

    j_values holds one match quality per positive prediction, 0.0 for the
    unmatched ones; expectations replace the hard indicator with its
    closed-form probability.
    """
    weight = math.fsum(expected_indicator(j, density) for j in j_values)
    return _prf(weight, n_pos, n_gt)


PairScore = Callable[[int, int, int], float]


def confidence_sweep(pages: Sequence[tuple[list[Prediction], list[GroundTruth]]],
                     cfg: MatchConfig,
                     pair_score: PairScore | None = None) -> list[PRPoint]:
    """Precision/recall at every distinct confidence cutoff, pooled over pages.

    The sweep walks distinct confidences in descending order; at each value
    the positive set is every prediction at least that confident, and the
    matching is rebuilt. pair_score(page, pred, gt) reweights each true
    positive; None counts plainly. The conventional anchor point
    (recall 0, precision 1) is prepended.

    Returns:
        PRPoints in sweep order, recall non-decreasing.
    """
    cutoffs = sorted({p.confidence for preds, _ in pages for p in preds}, reverse=True)
    points = [PRPoint(1.0, 1.0, 0.0)]
    total_gt = sum(len(gts) for _, gts in pages)
    for cut in cutoffs:
        n_pos = 0
        page_weights = []
        for page_idx, (preds, gts) in enumerate(pages):
            keep = [i for i, p in enumerate(preds) if p.confidence >= cut]
            n_pos += len(keep)
            found = match([preds[i] for i in keep], gts, cfg)
            for pair in found.pairs:
                if pair_score is None:
                    page_weights.append(1.0)
                else:
                    page_weights.append(pair_score(page_idx, keep[pair.pred_index], pair.gt_index))
        weight = math.fsum(page_weights)
        p, r, _ = _prf(weight, n_pos, total_gt)
        points.append(PRPoint(cut, p, r))
    return points


def pr_curve(preds: list[Prediction], gts: list[GroundTruth], cfg: MatchConfig) -> list[PRPoint]:
    """Single-page precision/recall curve over confidence cutoffs."""
    return confidence_sweep([(preds, gts)], cfg)


def average_precision(curve: Sequence[PRPoint]) -> float:
    """Step-sum of precision over recall increments."""
    ap = 0.0
    prev_recall = 0.0
    for point in curve:
        ap += (point.recall - prev_recall) * point.precision
        prev_recall = point.recall
    return ap


def d_ece(predictions: Sequence[tuple[float, bool]], m_bins: int = 10) -> tuple[float, list[ReliabilityBin]]:
    """Detection expected calibration error over equal-width confidence bins.

    Args:
        predictions: (confidence, is_true_positive) for every prediction.
        m_bins: number of bins partitioning (0, 1].

    Returns:
        (score, bins): the weighted mean absolute gap between per-bin
        precision and mean confidence, weights proportional to bin counts,
        and the bins themselves. Empty bins report zeros.
    """
    if m_bins < 1:
        raise ValueError("need at least one bin")
    confidences: list[list[float]] = [[] for _ in range(m_bins)]
    tp_counts = [0] * m_bins
    for confidence, is_tp in predictions:
        idx = min(m_bins - 1, max(0, math.ceil(confidence * m_bins) - 1))
        confidences[idx].append(confidence)
        tp_counts[idx] += bool(is_tp)
    n = len(predictions)
    bins = []
    gaps = []
    for m in range(m_bins):
        lo, hi = m / m_bins, (m + 1) / m_bins
        count = len(confidences[m])
        if count == 0:
            bins.append(ReliabilityBin(lo, hi, 0, 0.0, 0.0))
            continue
        mean_conf = math.fsum(confidences[m]) / count
        precision = tp_counts[m] / count
        bins.append(ReliabilityBin(lo, hi, count, mean_conf, precision))
        gaps.append(count / n * abs(precision - mean_conf))
    return math.fsum(gaps), bins
