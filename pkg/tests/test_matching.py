"""Chunk-stream similarity and greedy table matching."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tabeval import (
    BBox,
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
    parse_table_markup,
    threshold_positives,
)


def one_row(*texts):
    cells = "".join(f"<td>{t}</td>" for t in texts)
    return parse_table_markup(f"<table><tr>{cells}</tr></table>")


class TestContentChunks:
    def test_pairs_up_characters(self):
        assert content_chunks("Location") == ["Lo", "ca", "ti", "on"]

    def test_odd_tail_is_a_single_character(self):
        assert content_chunks("Times") == ["Ti", "me", "s"]

    def test_whitespace_is_removed_first(self):
        assert content_chunks("a b\tc\nd") == ["ab", "cd"]

    def test_empty(self):
        assert content_chunks("") == []
        assert content_chunks(" \n\t") == []


class TestChunkPairs:
    def test_stream_crosses_cell_boundaries(self):
        table = one_row("Location", "Time", "Times")
        assert content_chunk_pairs(table) == [
            ("Lo", "ca"), ("ca", "ti"), ("ti", "on"), ("on", "Ti"),
            ("Ti", "me"), ("me", "Ti"), ("Ti", "me"), ("me", "s"),
        ]

    def test_cells_flatten_in_row_major_order(self):
        table = parse_table_markup(
            "<table><tr><td>cd</td><td>ef</td></tr><tr><td>gh</td></tr></table>"
        )
        assert content_chunk_pairs(table) == [("cd", "ef"), ("ef", "gh")]

    def test_single_chunk_has_no_pairs(self):
        assert content_chunk_pairs(one_row("ab")) == []


class TestContentJaccard:
    def test_identical_tables(self):
        a = one_row("Location", "Time")
        assert content_jaccard(a, a) == 1.0

    def test_disjoint_tables(self):
        assert content_jaccard(one_row("abcdef"), one_row("uvwxyz")) == 0.0

    def test_frozen_partial_overlap(self):
        # Location: (Lo,ca) (ca,ti) (ti,on); Locate: (Lo,ca) (ca,te).
        assert content_jaccard(one_row("Location"), one_row("Locate")) == 0.25

    def test_multiset_counts_matter(self):
        # (ab,ab) three times versus once: intersection 1, union 3.
        assert content_jaccard(one_row("abababab"), one_row("abab")) == 1 / 3

    def test_both_streams_empty(self):
        assert content_jaccard(one_row("ab"), one_row("xy")) == 1.0

    def test_one_stream_empty(self):
        assert content_jaccard(one_row("ab"), one_row("abcd")) == 0.0

    def test_symmetric(self):
        a, b = one_row("Location"), one_row("Locate")
        assert content_jaccard(a, b) == content_jaccard(b, a)


class TestThresholdPositives:
    def test_strictly_greater(self):
        keep = Prediction(bbox=BBox(0, 0, 1, 1), confidence=0.6)
        drop = Prediction(bbox=BBox(0, 0, 1, 1), confidence=0.5)
        assert threshold_positives([keep, drop], 0.5) == [keep]


class TestMatch:
    def test_basic_pairing(self):
        preds = [Prediction(bbox=BBox(0, 0, 10, 9), confidence=0.8)]
        gts = [GroundTruth(bbox=BBox(0, 0, 10, 10))]
        out = match(preds, gts, MatchConfig())
        assert out.pairs == (MatchPair(0, 0, 0.9),)
        assert out.false_positives == ()
        assert out.false_negatives == ()
        assert out.n_gt == 1

    def test_threshold_is_strict(self):
        # IoU is exactly 0.5, which does not clear theta_j = 0.5.
        preds = [Prediction(bbox=BBox(0, 0, 2, 1))]
        gts = [GroundTruth(bbox=BBox(0, 0, 1, 1))]
        out = match(preds, gts, MatchConfig(theta_j=0.5))
        assert out.pairs == ()
        assert out.false_positives == (0,)
        assert out.false_negatives == (0,)

    def test_greedy_takes_best_pair_first(self):
        gts = [GroundTruth(bbox=BBox(0, 0, 10, 1)), GroundTruth(bbox=BBox(10, 0, 20, 1))]
        preds = [
            Prediction(bbox=BBox(2, 0, 12, 1)),  # 2/3 with the first table
            Prediction(bbox=BBox(0, 0, 10, 1)),  # exact hit on the first table
        ]
        out = match(preds, gts, MatchConfig(theta_j=0.5))
        assert out.pairs == (MatchPair(1, 0, 1.0),)
        assert out.false_positives == (0,)
        assert out.false_negatives == (1,)

    def test_similarity_tie_prefers_higher_confidence(self):
        gts = [GroundTruth(bbox=BBox(0, 0, 10, 10))]
        preds = [
            Prediction(bbox=BBox(0, 0, 10, 8), confidence=0.5),
            Prediction(bbox=BBox(0, 0, 10, 8), confidence=0.9),
        ]
        out = match(preds, gts, MatchConfig())
        assert out.pairs == (MatchPair(1, 0, 0.8),)

    def test_full_tie_prefers_earlier_prediction(self):
        gts = [GroundTruth(bbox=BBox(0, 0, 10, 10))]
        preds = [
            Prediction(bbox=BBox(0, 0, 10, 8), confidence=0.7),
            Prediction(bbox=BBox(0, 0, 10, 8), confidence=0.7),
        ]
        out = match(preds, gts, MatchConfig())
        assert out.pairs == (MatchPair(0, 0, 0.8),)

    def test_content_mode_uses_jaccard(self):
        preds = [Prediction(table=one_row("Location"))]
        gts = [GroundTruth(table=one_row("Location"))]
        out = match(preds, gts, MatchConfig(mode="content"))
        assert out.pairs == (MatchPair(0, 0, 1.0),)

    def test_bbox_mode_requires_boxes(self):
        with pytest.raises(ModeMismatchError):
            match([Prediction(table=one_row("x"))],
                  [GroundTruth(bbox=BBox(0, 0, 1, 1))], MatchConfig())
        with pytest.raises(ModeMismatchError):
            match([Prediction(bbox=BBox(0, 0, 1, 1))],
                  [GroundTruth(table=one_row("x"))], MatchConfig())

    def test_content_mode_requires_ground_truth_markup(self):
        with pytest.raises(ModeMismatchError):
            match([Prediction(table=one_row("x"))],
                  [GroundTruth(bbox=BBox(0, 0, 1, 1))], MatchConfig(mode="content"))

    def test_content_mode_tolerates_unparsed_prediction(self):
        out = match([Prediction(bbox=BBox(0, 0, 1, 1))],
                    [GroundTruth(table=one_row("x"))], MatchConfig(mode="content"))
        assert out.pairs == ()
        assert out.false_positives == (0,)

    @given(
        st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30),
                           st.floats(0, 1, allow_nan=False)), max_size=8),
        st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), max_size=8),
        st.sampled_from([0.0, 0.25, 0.5]),
    )
    def test_outcome_accounts_for_every_table(self, pred_spec, gt_spec, theta):
        preds = [Prediction(bbox=BBox(x, y, x + 10, y + 10), confidence=c)
                 for x, y, c in pred_spec]
        gts = [GroundTruth(bbox=BBox(x, y, x + 10, y + 10)) for x, y in gt_spec]
        out = match(preds, gts, MatchConfig(theta_j=theta))

        assert len(out.pairs) + len(out.false_positives) == len(preds)
        assert len(out.pairs) + len(out.false_negatives) == len(gts)
        assert out.n_positive == len(preds)
        assert out.n_gt == len(gts)

        pred_indices = [p.pred_index for p in out.pairs]
        gt_indices = [p.gt_index for p in out.pairs]
        assert len(set(pred_indices)) == len(pred_indices)
        assert len(set(gt_indices)) == len(gt_indices)
        for pair in out.pairs:
            assert pair.similarity > theta


class TestClassifierReport:
    @staticmethod
    def outcome(pairs, fps, n_gt):
        matched_gts = {g for _, g in pairs}
        return MatchSet(
            pairs=tuple(MatchPair(p, g, 1.0) for p, g in pairs),
            false_positives=tuple(fps),
            false_negatives=tuple(g for g in range(n_gt) if g not in matched_gts),
            n_gt=n_gt,
        )

    def test_partial_agreement(self):
        by_box = self.outcome([(0, 0), (1, 1)], fps=[2], n_gt=2)
        by_content = self.outcome([(1, 0), (2, 1)], fps=[0], n_gt=2)
        assert content_classifier_report(by_box, by_content) == (0.5, 0.5)

    def test_agreement_on_nothing_matched(self):
        by_box = self.outcome([], fps=[0], n_gt=1)
        by_content = self.outcome([], fps=[0], n_gt=1)
        assert content_classifier_report(by_box, by_content) == (1.0, 1.0)

    def test_content_silent_on_real_matches(self):
        by_box = self.outcome([(0, 0)], fps=[], n_gt=1)
        by_content = self.outcome([], fps=[0], n_gt=1)
        assert content_classifier_report(by_box, by_content) == (0.0, 0.0)

    def test_different_inputs_are_rejected(self):
        by_box = self.outcome([(0, 0)], fps=[], n_gt=1)
        by_content = self.outcome([(0, 0)], fps=[1], n_gt=1)
        with pytest.raises(CorpusMismatchError):
            content_classifier_report(by_box, by_content)
