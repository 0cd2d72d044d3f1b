"""tabeval: metrics and tooling for table detection, structure recognition,
and end-to-end extraction."""

from .corpus import CorpusError, CorpusRecord, TableRecord, load_corpus, read_corpus
from .detection import (
    PRPoint,
    ReliabilityBin,
    ThresholdDensity,
    average_precision,
    confidence_sweep,
    d_ece,
    expected_indicator,
    expected_prf,
    pr_curve,
    prf_at,
    wavg_f1,
)
from .e2e import ScoredPair, te_average_precision, te_precision_recall, te_sweep, tsr_given_td
from .evaluate import MetricReport, PageDiagnostics, RunConfig, evaluate
from .geometry import (
    BBox,
    InsufficientEvidenceError,
    Token,
    detect_rotation,
    filter_empty,
    iou,
    nms,
    top_k,
)
from .markup import (
    EmptyTableError,
    NoTableError,
    ParseError,
    normalize_markup,
    parse_table_markup,
    serialize_grid,
)
from .matching import (
    CorpusMismatchError,
    GroundTruth,
    MatchConfig,
    MatchPair,
    MatchSet,
    ModeMismatchError,
    Prediction,
    content_chunk_pairs,
    content_chunks,
    content_classifier_report,
    content_jaccard,
    match,
    threshold_positives,
)
from .model import LogicalCell, TableGrid, grid_entries_content, grid_entries_topology
from .report import emit_report
from .structure import (
    TableTree,
    TooLargeError,
    exact_2dmss,
    extent_iou,
    grits,
    grits_alignment,
    grits_content,
    grits_topology,
    lcs_similarity,
    levenshtein,
    table_tree,
    teds,
    tree_edit_distance,
    tree_size,
)
from .xycut import PixelPage, XYCutConfig, xycut

__version__ = "0.1.0"

__all__ = [
    "BBox",
    "CorpusError",
    "CorpusMismatchError",
    "CorpusRecord",
    "EmptyTableError",
    "GroundTruth",
    "InsufficientEvidenceError",
    "LogicalCell",
    "MatchConfig",
    "MatchPair",
    "MatchSet",
    "MetricReport",
    "ModeMismatchError",
    "NoTableError",
    "PRPoint",
    "PageDiagnostics",
    "ParseError",
    "PixelPage",
    "Prediction",
    "ReliabilityBin",
    "RunConfig",
    "ScoredPair",
    "TableGrid",
    "TableRecord",
    "TableTree",
    "ThresholdDensity",
    "Token",
    "TooLargeError",
    "XYCutConfig",
    "average_precision",
    "confidence_sweep",
    "content_chunk_pairs",
    "content_chunks",
    "content_classifier_report",
    "content_jaccard",
    "d_ece",
    "detect_rotation",
    "emit_report",
    "evaluate",
    "exact_2dmss",
    "expected_indicator",
    "expected_prf",
    "extent_iou",
    "filter_empty",
    "grid_entries_content",
    "grid_entries_topology",
    "grits",
    "grits_alignment",
    "grits_content",
    "grits_topology",
    "iou",
    "lcs_similarity",
    "levenshtein",
    "load_corpus",
    "match",
    "nms",
    "normalize_markup",
    "parse_table_markup",
    "pr_curve",
    "prf_at",
    "read_corpus",
    "serialize_grid",
    "table_tree",
    "te_average_precision",
    "te_precision_recall",
    "te_sweep",
    "teds",
    "threshold_positives",
    "top_k",
    "tree_edit_distance",
    "tree_size",
    "tsr_given_td",
    "wavg_f1",
    "xycut",
]
