import numpy as np
import pytest

from zspeedl.errors import DataError
from zspeedl.evaluate import GzslScores, gzsl_eval, harmonic_mean, mca


class TestMca:
    def test_all_correct(self):
        assert mca([0, 1, 2], [0, 1, 2], [0, 1, 2]) == 1.0

    def test_per_class_averaging_ignores_class_sizes(self):
        # one class fully correct, one fully wrong: 0.5 at any imbalance
        labels = [0] * 99 + [1]
        preds = [0] * 99 + [0]
        assert mca(preds, labels, [0, 1]) == 0.5

    def test_hand_counted_case(self):
        # classes sized (10, 1, 1) with (5, 1, 0) correct
        labels = [0] * 10 + [1] + [2]
        preds = [0] * 5 + [1] * 5 + [1] + [0]
        assert mca(preds, labels, [0, 1, 2]) == pytest.approx(0.5)

    def test_absent_class_excluded_from_mean(self):
        assert mca([0, 1], [0, 1], [0, 1, 7]) == 1.0

    def test_empty_labels_error(self):
        with pytest.raises(DataError):
            mca([], [], [0])

    def test_label_outside_classes_error(self):
        with pytest.raises(DataError):
            mca([0], [5], [0, 1])

    def test_permutation_invariance(self, rng):
        for _ in range(20):
            n_classes = int(rng.integers(2, 8))
            labels = rng.integers(0, n_classes, size=60)
            preds = rng.integers(0, n_classes, size=60)
            base = mca(preds, labels, np.arange(n_classes))
            perm = rng.permutation(n_classes)
            assert mca(perm[preds], perm[labels], np.arange(n_classes)) == \
                pytest.approx(base)

    def test_balanced_classes_equal_plain_accuracy(self, rng):
        for _ in range(20):
            n_classes = int(rng.integers(2, 6))
            per_class = int(rng.integers(3, 10))
            labels = np.repeat(np.arange(n_classes), per_class)
            preds = rng.integers(0, n_classes, size=labels.size)
            assert mca(preds, labels, np.arange(n_classes)) == \
                pytest.approx((preds == labels).mean())


class TestGzsl:
    def test_published_reference_triple(self):
        # U=4.66%, S=87.07% rounds to H=8.86%: check against the interval of
        # harmonic means reachable from the two-decimal-rounded inputs
        lo = harmonic_mean(0.87065, 0.04655)
        hi = harmonic_mean(0.87075, 0.04665)
        assert lo <= 0.0886 + 0.0001
        assert hi >= 0.0886 - 0.0001
        h = harmonic_mean(0.8707, 0.0466)
        assert abs(100 * h - 8.86) < 0.015

    def test_equal_accuracies(self):
        assert harmonic_mean(0.4, 0.4) == pytest.approx(0.4)

    def test_zero_unseen_gives_zero(self):
        assert harmonic_mean(0.9, 0.0) == 0.0

    def test_harmonic_mean_between_min_and_max(self, rng):
        for _ in range(50):
            a, b = rng.uniform(0.01, 1.0, size=2)
            h = harmonic_mean(a, b)
            assert min(a, b) - 1e-12 <= h <= max(a, b) + 1e-12

    def test_gzsl_eval_composes_mca(self):
        scores = gzsl_eval(
            pred_seen=[0, 0, 1, 1], labels_seen=[0, 0, 1, 0],
            pred_unseen=[2, 3, 3], labels_unseen=[2, 3, 3],
            seen_classes=[0, 1], unseen_classes=[2, 3])
        # seen: class 0 correct on 2 of 3, class 1 correct on its only instance
        assert scores.acc_seen == pytest.approx((2 / 3 + 1.0) / 2)
        assert scores.acc_unseen == 1.0
        assert scores.harmonic_mean == pytest.approx(
            harmonic_mean(scores.acc_seen, scores.acc_unseen))

    def test_empty_partition_rejected(self):
        with pytest.raises(DataError):
            gzsl_eval([], [], [0], [0], [0], [0])

    def test_scores_dataclass(self):
        s = GzslScores(acc_seen=0.5, acc_unseen=0.25, harmonic_mean=1 / 3)
        assert s.as_dict() == {"u": 0.25, "s": 0.5, "h": 1 / 3}
