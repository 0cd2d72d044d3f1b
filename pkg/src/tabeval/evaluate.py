"""Corpus evaluation: pooled detection, structure, and extraction metrics.

Scalar metrics pool true positives, false positives, and false negatives
over all pages (micro averaging); per-page scores are kept as diagnostics.
Float sums use math.fsum, whose exact rounding makes every aggregate
independent of page order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import CorpusError, CorpusRecord
from .detection import (
    PRPoint,
    ReliabilityBin,
    ThresholdDensity,
    _prf,
    average_precision,
    confidence_sweep,
    d_ece,
    expected_prf,
    prf_at,
    wavg_f1,
)
from .e2e import ScoredPair, te_precision_recall, tsr_given_td
from .markup import NoTableError, ParseError, parse_table_markup
from .matching import GroundTruth, MatchConfig, Prediction, match
from .model import TableGrid
from .structure import TableTree, grits_content, grits_topology, table_tree, teds

WEIGHTINGS = ("topology", "content", "teds")


@dataclass(frozen=True)
class RunConfig:
    """Evaluation parameters.

    mode: similarity used for matching, box overlap or content overlap.
    theta_j: match quality a pair must strictly exceed to count.
    theta_c: confidence cutoff defining the positive set; None keeps all.
    density: lower support bound of the headline expected-metric density.
    bins: reliability bins for the calibration error.
    weighting: which structure score labels the headline extraction metric.
    """

    mode: str = "bbox"
    theta_j: float = 0.5
    theta_c: float | None = None
    density: float = 0.5
    bins: int = 10
    weighting: str = "topology"
    wavg_thresholds: tuple[float, ...] = (0.6, 0.7, 0.8, 0.9)

    def __post_init__(self) -> None:
        if self.mode not in ("bbox", "content"):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"unknown weighting: {self.weighting!r}")
        if self.density not in (0.0, 0.5):
            raise ValueError(f"density must be 0 or 0.5, got {self.density}")

    def match_config(self, theta_j: float | None = None) -> MatchConfig:
        return MatchConfig(mode=self.mode,
                           theta_j=self.theta_j if theta_j is None else theta_j,
                           theta_c=self.theta_c)


@dataclass
class PageDiagnostics:
    page_id: str
    n_gt: int
    n_predictions: int
    n_positive: int
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    tsr: dict[str, float | None]
    warnings: tuple[str, ...]


@dataclass
class MetricReport:
    """Everything a run produces, ready for serialization."""

    config: RunConfig
    counts: dict[str, int]
    detection: dict[str, object]
    tsr: dict[str, object]
    te: dict[str, object] | None
    macro: dict[str, float] | None
    pr_points: list[PRPoint]
    te_points: dict[str, list[PRPoint]] | None
    reliability: list[ReliabilityBin]
    pages: list[PageDiagnostics]
    warnings: list[str] = field(default_factory=list)

    def summary_dict(self) -> dict:
        return {
            "config": {
                "mode": self.config.mode,
                "theta_j": self.config.theta_j,
                "theta_c": self.config.theta_c,
                "density": self.config.density,
                "bins": self.config.bins,
                "weighting": self.config.weighting,
            },
            "counts": dict(self.counts),
            "detection": dict(self.detection),
            "tsr": dict(self.tsr),
            "te": dict(self.te) if self.te is not None else None,
            "macro": dict(self.macro) if self.macro is not None else None,
            "warnings": list(self.warnings),
        }


@dataclass
class _Side:
    """A table with everything derived from its corpus record."""

    bbox: object = None
    grid: TableGrid | None = None
    tree: TableTree | None = None
    has_markup: bool = False
    confidence: float = 1.0


@dataclass
class _Page:
    page_id: str
    gts: list[_Side]
    preds: list[_Side]
    warnings: list[str]


def _prepare(corpus: Sequence[CorpusRecord], cfg: RunConfig) -> list[_Page]:
    pages = []
    mode_errors = []
    for rec in corpus:
        warnings = list(rec.warnings)
        gts = []
        for k, gt in enumerate(rec.ground_truth):
            side = _Side(bbox=gt.bbox, has_markup=gt.markup is not None)
            if gt.markup is not None:
                try:
                    side.grid = parse_table_markup(gt.markup)
                    side.tree = table_tree(gt.markup)
                except (NoTableError, ParseError) as exc:
                    raise CorpusError(
                        f"page {rec.page_id}: ground_truth[{k}]: {exc}") from None
                warnings.extend(
                    f"ground_truth[{k}]: {w}" for w in side.grid.warnings)
            if cfg.mode == "bbox" and side.bbox is None:
                mode_errors.append(f"page {rec.page_id}: ground_truth[{k}] has no bbox")
            if cfg.mode == "content" and side.grid is None:
                mode_errors.append(f"page {rec.page_id}: ground_truth[{k}] has no markup")
            gts.append(side)
        preds = []
        for k, pred in enumerate(rec.predictions):
            side = _Side(bbox=pred.bbox, has_markup=pred.markup is not None,
                         confidence=pred.confidence)
            if pred.markup is not None:
                try:
                    side.grid = parse_table_markup(pred.markup)
                    side.tree = table_tree(pred.markup)
                except (NoTableError, ParseError) as exc:
                    # Malformed model output scores zero; it must not stop a run.
                    warnings.append(f"predictions[{k}]: unusable markup ({exc})")
            if cfg.mode == "bbox" and side.bbox is None:
                mode_errors.append(f"page {rec.page_id}: predictions[{k}] has no bbox")
            preds.append(side)
        pages.append(_Page(rec.page_id, gts, preds, warnings))
    if mode_errors:
        raise CorpusError(f"{cfg.mode} mode is not usable with this corpus:\n"
                          + "\n".join(mode_errors))
    return pages


def _as_prediction(side: _Side) -> Prediction:
    return Prediction(bbox=side.bbox, table=side.grid, confidence=side.confidence)


def _as_gt(side: _Side) -> GroundTruth:
    return GroundTruth(bbox=side.bbox, table=side.grid)


class _PairScores:
    """Lazy structure scores for (page, prediction, ground truth) pairs."""

    def __init__(self, pages: list[_Page]) -> None:
        self.pages = pages
        self.cache: dict[tuple[int, int, int], dict[str, float]] = {}

    def get(self, page: int, pred: int, gt: int) -> dict[str, float]:
        key = (page, pred, gt)
        got = self.cache.get(key)
        if got is not None:
            return got
        p = self.pages[page].preds[pred]
        g = self.pages[page].gts[gt]
        if p.grid is None or g.grid is None:
            scores = {w: 0.0 for w in WEIGHTINGS}
        else:
            scores = {
                "topology": grits_topology(p.grid, g.grid),
                "content": grits_content(p.grid, g.grid),
                "teds": teds(p.tree, g.tree),
            }
        self.cache[key] = scores
        return scores

    def scorer(self, weighting: str):
        def score(page: int, pred: int, gt: int) -> float:
            return self.get(page, pred, gt)[weighting]
        return score


def evaluate(corpus: Sequence[CorpusRecord], cfg: RunConfig | None = None) -> MetricReport:
    """Run every applicable metric over a corpus.

    Raises:
        CorpusError: ground truth markup does not parse, or the similarity
            mode needs a field the corpus does not carry.
    """
    if cfg is None:
        cfg = RunConfig()
    pages = _prepare(corpus, cfg)
    warnings = [f"page {p.page_id}: {w}" for p in pages for w in p.warnings]

    sweep_pages = [([_as_prediction(s) for s in p.preds], [_as_gt(s) for s in p.gts])
                   for p in pages]
    positive_pages = []
    for preds, gts in sweep_pages:
        if cfg.theta_c is None:
            positive_pages.append((list(preds), gts))
        else:
            positive_pages.append(
                ([p for p in preds if p.confidence > cfg.theta_c], gts))

    # Headline matching and per-page diagnostics.
    tp = fp = fn = 0
    page_diags = []
    headline_pairs: list[tuple[int, int, int, float]] = []
    scores = _PairScores(pages)
    tsr_applicable = (all(g.has_markup for p in pages for g in p.gts)
                      and any(s.has_markup for p in pages for s in p.preds))
    if not tsr_applicable and any(s.has_markup for p in pages for s in p.preds):
        warnings.append("structure metrics skipped: not every ground-truth table has markup")

    for page_idx, (preds, gts) in enumerate(positive_pages):
        found = match(preds, gts, cfg.match_config())
        p, r, f1 = prf_at(found)
        page_tsr: dict[str, float | None] = {w: None for w in WEIGHTINGS}
        if tsr_applicable:
            for w in WEIGHTINGS:
                vals = [ScoredPair(pair.similarity,
                                   scores.get(page_idx, pair.pred_index, pair.gt_index)[w])
                        for pair in found.pairs]
                page_tsr[w] = tsr_given_td(vals)
        for pair in found.pairs:
            headline_pairs.append((page_idx, pair.pred_index, pair.gt_index, pair.similarity))
        tp += len(found.pairs)
        fp += len(found.false_positives)
        fn += len(found.false_negatives)
        page_diags.append(PageDiagnostics(
            page_id=pages[page_idx].page_id,
            n_gt=len(gts),
            n_predictions=len(sweep_pages[page_idx][0]),
            n_positive=found.n_positive,
            tp=len(found.pairs),
            fp=len(found.false_positives),
            fn=len(found.false_negatives),
            precision=p,
            recall=r,
            f1=f1,
            tsr=page_tsr,
            warnings=tuple(pages[page_idx].warnings),
        ))

    n_pos = tp + fp
    n_gt = tp + fn
    precision, recall, f1 = _prf(float(tp), n_pos, n_gt)

    # F1 across stricter match thresholds, weighted by the threshold.
    f1_by_threshold = {}
    for theta in cfg.wavg_thresholds:
        t_tp = t_fp = t_fn = 0
        for preds, gts in positive_pages:
            found = match(preds, gts, cfg.match_config(theta_j=theta))
            t_tp += len(found.pairs)
            t_fp += len(found.false_positives)
            t_fn += len(found.false_negatives)
        _, _, theta_f1 = _prf(float(t_tp), t_tp + t_fp, t_tp + t_fn)
        f1_by_threshold[theta] = theta_f1
    wavg = wavg_f1(f1_by_threshold)

    # Expected metrics over match qualities from threshold-free matching.
    j_values: list[float] = []
    for preds, gts in positive_pages:
        found = match(preds, gts, cfg.match_config(theta_j=0.0))
        j_values.extend(pair.similarity for pair in found.pairs)
        j_values.extend(0.0 for _ in found.false_positives)
    expected = {}
    for key, s in (("s0", 0.0), ("s05", 0.5)):
        ep, er, ef = expected_prf(j_values, n_pos, n_gt, ThresholdDensity(s))
        expected[key] = {"precision": ep, "recall": er, "f1": ef}
    headline_expected = expected["s0" if cfg.density == 0.0 else "s05"]

    # Confidence sweep over every prediction, whatever theta_c is.
    pr_points = confidence_sweep(sweep_pages, cfg.match_config())
    ap = average_precision(pr_points)

    # Calibration over every prediction.
    flagged: list[tuple[float, bool]] = []
    for page_idx, (preds, gts) in enumerate(sweep_pages):
        found = match(preds, gts, cfg.match_config())
        matched = {pair.pred_index for pair in found.pairs}
        flagged.extend((p.confidence, i in matched) for i, p in enumerate(preds))
    ece, bins = d_ece(flagged, cfg.bins)

    detection = {
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "wavg_f1": wavg,
        "f1_by_threshold": {f"{t:g}": v for t, v in sorted(f1_by_threshold.items())},
        "ap": ap,
        "expected": expected,
        "expected_precision": headline_expected["precision"],
        "expected_recall": headline_expected["recall"],
        "expected_f1": headline_expected["f1"],
        "d_ece": ece,
    }

    # Structure and extraction metrics.
    tsr_td: dict[str, float | None] = {w: None for w in WEIGHTINGS}
    te = None
    te_points = None
    if tsr_applicable:
        for w in WEIGHTINGS:
            pairs = [ScoredPair(sim, scores.get(pg, pi, gi)[w])
                     for pg, pi, gi, sim in headline_pairs]
            tsr_td[w] = tsr_given_td(pairs)
        te = {}
        te_points = {}
        for w in WEIGHTINGS:
            pairs = [ScoredPair(sim, scores.get(pg, pi, gi)[w])
                     for pg, pi, gi, sim in headline_pairs]
            tp_, tr_, tf_ = te_precision_recall(pairs, n_pos, n_gt, cfg.theta_j)
            points = confidence_sweep(sweep_pages, cfg.match_config(),
                                      pair_score=scores.scorer(w))
            te_points[w] = points
            te[w] = {"precision": tp_, "recall": tr_, "f1": tf_,
                     "ap": average_precision(points)}
        te["weighting"] = cfg.weighting

    content_match: dict[str, float | None] = {"precision": None, "recall": None}
    both_fields = (pages
                   and all(s.bbox is not None and s.grid is not None
                           for p in pages for s in p.gts + p.preds))
    if both_fields:
        truth: set[tuple[int, int]] = set()
        called: set[tuple[int, int]] = set()
        for page_idx, (preds, gts) in enumerate(positive_pages):
            by_box = match(preds, gts, MatchConfig("bbox", cfg.theta_j))
            by_text = match(preds, gts, MatchConfig("content", cfg.theta_j))
            truth.update((page_idx, pair.pred_index) for pair in by_box.pairs)
            called.update((page_idx, pair.pred_index) for pair in by_text.pairs)
        agree = len(truth & called)
        content_match["precision"] = (agree / len(called)) if called else (1.0 if not truth else 0.0)
        content_match["recall"] = (agree / len(truth)) if truth else (1.0 if not called else 0.0)

    macro = None
    if page_diags:
        macro = {
            "precision": math.fsum(d.precision for d in page_diags) / len(page_diags),
            "recall": math.fsum(d.recall for d in page_diags) / len(page_diags),
            "f1": math.fsum(d.f1 for d in page_diags) / len(page_diags),
        }

    counts = {
        "pages": len(pages),
        "ground_truth": n_gt,
        "predictions": sum(len(p.preds) for p in pages),
        "positives": n_pos,
        "tp": tp,
        "fp": fp,
        "fn": fn,
    }
    return MetricReport(
        config=cfg,
        counts=counts,
        detection=detection,
        tsr={"tsr_td": tsr_td, "content_match": content_match},
        te=te,
        macro=macro,
        pr_points=pr_points,
        te_points=te_points,
        reliability=bins,
        pages=page_diags,
        warnings=warnings,
    )
