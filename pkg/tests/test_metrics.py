"""Metric formulas against hand tallies and exhaustive oracles; the paired
t-test against an independent statistical reference."""

import math

import numpy as np
import pytest
import scipy.stats

from featsel.metrics import (ConfusionCounts, TTestResult, accuracy,
                             accuracy_from_counts, confusion, macro_auc_ovr,
                             macro_f1, paired_t_test, student_two_tailed_p)


class TestConfusion:
    def test_perfect_prediction(self):
        y = np.array([0, 1, 2, 0, 1, 2], dtype=np.int64)
        counts = confusion(y, y, 3)
        assert (counts.fp == 0).all()
        assert (counts.fn == 0).all()
        assert counts.tp.tolist() == [2, 2, 2]

    def test_all_one_class_counting(self):
        pred = np.zeros(10, dtype=np.int64)
        true = np.array([0] * 5 + [1] * 5, dtype=np.int64)
        counts = confusion(pred, true, 2)
        assert counts.tp[0] == 5 and counts.fp[0] == 5
        assert counts.tn[0] == 0 and counts.fn[0] == 0

    def test_hand_tally_three_class(self):
        pred = np.array([0, 0, 1, 1, 2, 2, 0, 1, 2, 0, 1, 2], dtype=np.int64)
        true = np.array([0, 1, 1, 2, 2, 0, 0, 1, 2, 1, 0, 2], dtype=np.int64)
        counts = confusion(pred, true, 3)
        # tallied by hand from the 12 pairs above
        assert counts.tp.tolist() == [2, 2, 3]
        assert counts.fp.tolist() == [2, 2, 1]
        assert counts.fn.tolist() == [2, 2, 1]
        assert counts.tn.tolist() == [6, 6, 7]
        for c in range(3):
            assert counts.tp[c] + counts.tn[c] + counts.fp[c] + counts.fn[c] == 12

    def test_out_of_range_label(self):
        with pytest.raises(ValueError):
            confusion(np.array([0, 3]), np.array([0, 1]), 3)


class TestAccuracy:
    def test_binary_counts_form(self):
        assert accuracy_from_counts(50, 40, 5, 5) == pytest.approx(0.9, abs=1e-15)

    def test_exact_match_form(self):
        pred = np.array([0, 1, 1, 2])
        true = np.array([0, 1, 2, 2])
        assert accuracy(pred, true) == pytest.approx(0.75, abs=1e-15)
        assert accuracy(true, true) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            accuracy(np.array([]), np.array([]))
        with pytest.raises(ValueError):
            accuracy_from_counts(0, 0, 0, 0)


class TestMacroF1:
    def test_fixed_point(self):
        # per-class precision = recall = p implies per-class F1 = p
        counts = ConfusionCounts(tp=np.array([3, 3]), tn=np.array([3, 3]),
                                 fp=np.array([1, 1]), fn=np.array([1, 1]))
        assert macro_f1(counts) == pytest.approx(0.75, abs=1e-12)

    def test_zero_over_zero_class(self):
        # class 1 never predicted and never present: F1 contribution 0
        pred = np.array([0, 0, 0, 0], dtype=np.int64)
        true = np.array([0, 0, 0, 0], dtype=np.int64)
        counts = confusion(pred, true, 2)
        assert macro_f1(counts) == pytest.approx(0.5, abs=1e-12)

    def test_formula_oracle_three_class(self):
        pred = np.array([0, 0, 1, 1, 2, 2, 0, 1, 2, 0, 1, 2], dtype=np.int64)
        true = np.array([0, 1, 1, 2, 2, 0, 0, 1, 2, 1, 0, 2], dtype=np.int64)
        counts = confusion(pred, true, 3)
        f1s = []
        for tp, fp, fn in ((2, 2, 2), (2, 2, 2), (3, 1, 1)):
            precision = tp / (tp + fp)
            recall = tp / (tp + fn)
            f1s.append(2 * precision * recall / (precision + recall))
        assert macro_f1(counts) == pytest.approx(sum(f1s) / 3, abs=1e-12)


def oracle_auc_pairs(scores_c, positives):
    """Exhaustive pos x neg pair count, ties worth one half."""
    pos = [s for s, p in zip(scores_c, positives) if p]
    neg = [s for s, p in zip(scores_c, positives) if not p]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total / (len(pos) * len(neg))


class TestMacroAuc:
    def test_perfect_separation(self):
        scores = np.array([[0.9, 0.1], [0.8, 0.2], [0.2, 0.8], [0.1, 0.9]])
        labels = np.array([0, 0, 1, 1], dtype=np.int64)
        assert macro_auc_ovr(scores, labels) == pytest.approx(1.0, abs=1e-12)

    def test_identical_scores_half(self):
        scores = np.full((6, 2), 0.5)
        labels = np.array([0, 1, 0, 1, 0, 1], dtype=np.int64)
        assert macro_auc_ovr(scores, labels) == pytest.approx(0.5, abs=1e-12)

    def test_single_inversion_eight_instances(self):
        # binary fixture: one inverted pair out of 4x4 = 16
        s1 = np.array([0.9, 0.8, 0.7, 0.35, 0.6, 0.3, 0.2, 0.1])
        labels = np.array([1, 1, 1, 1, 0, 0, 0, 0], dtype=np.int64)
        scores = np.column_stack([1 - s1, s1])
        auc = macro_auc_ovr(scores, labels)
        assert auc == pytest.approx(15 / 16, abs=1e-12)

    def test_exhaustive_pair_oracle_random(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(4, 40))
            n_classes = int(rng.integers(2, 5))
            labels = rng.integers(0, n_classes, size=n).astype(np.int64)
            scores = rng.random((n, n_classes))
            # quantize to force ties
            scores = np.round(scores, 1)
            evaluable = [c for c in range(n_classes)
                         if 0 < (labels == c).sum() < n]
            if not evaluable:
                continue
            expected = np.mean([oracle_auc_pairs(scores[:, c].tolist(),
                                                 (labels == c).tolist())
                                for c in evaluable])
            assert macro_auc_ovr(scores, labels) == pytest.approx(
                expected, abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        labels = rng.integers(0, 3, size=30).astype(np.int64)
        scores = rng.random((30, 3))
        base = macro_auc_ovr(scores, labels)
        transformed = np.exp(scores * 3.7)  # strictly monotone, not affine
        assert macro_auc_ovr(transformed, labels) == pytest.approx(base, abs=1e-12)

    def test_skips_absent_class(self):
        scores = np.array([[0.7, 0.2, 0.1], [0.3, 0.6, 0.1],
                           [0.8, 0.1, 0.1], [0.2, 0.7, 0.1]])
        labels = np.array([0, 1, 0, 1], dtype=np.int64)  # class 2 absent
        auc = macro_auc_ovr(scores, labels)
        expected = np.mean([oracle_auc_pairs(scores[:, c].tolist(),
                                             (labels == c).tolist())
                            for c in (0, 1)])
        assert auc == pytest.approx(expected, abs=1e-12)

    def test_no_evaluable_class(self):
        scores = np.array([[1.0, 0.0], [0.5, 0.5]])
        labels = np.array([0, 0], dtype=np.int64)
        with pytest.raises(ValueError):
            macro_auc_ovr(scores, labels)


class TestPairedTTest:
    def test_exact_equality_is_tie(self):
        a = [0.8, 0.9, 0.7, 0.85]
        result = paired_t_test(a, list(a))
        assert result == TTestResult(0.0, 1.0, "tie")

    def test_constant_shift_degenerate(self):
        a = np.array([0.9, 0.8, 0.7])
        up = paired_t_test(a + 0.05, a)
        assert up.verdict == "win"
        assert up.p_value == 0.0
        assert math.isinf(up.t) and up.t > 0
        down = paired_t_test(a - 0.05, a)
        assert down.verdict == "loss"
        assert math.isinf(down.t) and down.t < 0

    def test_reference_fixture(self):
        d = [1.2, 0.8, 1.1, 0.9, 1.0]
        zeros = [0.0] * 5
        result = paired_t_test(d, zeros)
        t_ref, p_ref = scipy.stats.ttest_rel(d, zeros)
        assert result.t == pytest.approx(t_ref, abs=1e-6)
        assert result.p_value == pytest.approx(p_ref, abs=1e-6)
        assert result.verdict == "win"

    def test_antisymmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(2, 15))
            a = rng.random(n)
            b = rng.random(n)
            if float(np.std(a - b, ddof=1) if n > 1 else 0.0) == 0.0:
                continue
            fwd = paired_t_test(a, b)
            rev = paired_t_test(b, a)
            assert fwd.t == pytest.approx(-rev.t, abs=1e-12)
            assert fwd.p_value == pytest.approx(rev.p_value, abs=1e-12)
            swap = {"win": "loss", "loss": "win", "tie": "tie"}
            assert rev.verdict == swap[fwd.verdict]

    def test_p_matches_reference_cdf_over_df_range(self):
        for df in range(2, 61):
            for t in (0.0, 0.31, 1.0, 1.96, 2.6, 4.5, 9.0):
                ours = student_two_tailed_p(t, df)
                ref = 2.0 * scipy.stats.t.sf(abs(t), df)
                assert ours == pytest.approx(ref, abs=1e-6), (df, t)

    def test_matches_scipy_on_random_pairs(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(3, 30))
            a = rng.random(n)
            b = rng.random(n)
            got = paired_t_test(a, b)
            t_ref, p_ref = scipy.stats.ttest_rel(a, b)
            assert got.t == pytest.approx(t_ref, rel=1e-9, abs=1e-9)
            assert got.p_value == pytest.approx(p_ref, abs=1e-9)

    def test_length_contracts(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0], [1.0])
        with pytest.raises(ValueError):
            paired_t_test([1.0, 2.0], [1.0])

    def test_verdict_threshold(self):
        # marginal case around alpha: verdict flips with alpha
        a = np.array([0.82, 0.86, 0.84, 0.88, 0.83])
        b = a - np.array([0.015, 0.02, 0.01, 0.025, 0.012])
        strict = paired_t_test(a, b, alpha=1e-6)
        loose = paired_t_test(a, b, alpha=0.05)
        assert loose.verdict == "win"
        assert strict.verdict == "tie"
