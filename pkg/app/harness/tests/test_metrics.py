"""
Tests for Micro and Macro F1.
"""
import numpy as np
from django.test import SimpleTestCase

from harness.metrics import micro_macro_f1


class MulticlassF1Tests(SimpleTestCase):
    def test_perfect_predictions(self):
        self.assertEqual(micro_macro_f1([0, 1, 2, 1], [0, 1, 2, 1], (0, 1, 2)), (1.0, 1.0))

    def test_single_class_guess(self):
        micro, macro = micro_macro_f1([0, 0, 0, 0], [0, 0, 1, 1], (0, 1))

        self.assertEqual(micro, 0.5)
        self.assertAlmostEqual(macro, (2 / 3 + 0) / 2)

    def test_micro_equals_accuracy(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            truth = rng.integers(0, 4, 50)
            predictions = np.where(rng.random(50) < 0.6, truth, rng.integers(0, 4, 50))

            micro, _ = micro_macro_f1(predictions.tolist(), truth.tolist(), (0, 1, 2, 3))

            self.assertAlmostEqual(micro, np.mean(predictions == truth))

    def test_unused_class_counts_as_zero(self):
        _, macro = micro_macro_f1([0, 1], [0, 1], (0, 1, 2))

        self.assertAlmostEqual(macro, 2 / 3)

    def test_hand_computed_confusion(self):
        truth = ["a", "a", "b", "b", "c", "c", "c"]
        predictions = ["a", "b", "b", "b", "c", "a", "c"]

        micro, macro = micro_macro_f1(predictions, truth, ("a", "b", "c"))

        self.assertAlmostEqual(micro, 5 / 7)
        self.assertAlmostEqual(macro, (0.5 + 0.8 + 0.8) / 3)

    def test_misaligned_inputs_rejected(self):
        with self.assertRaises(ValueError):
            micro_macro_f1([0, 1], [0], (0, 1))


class MultilabelF1Tests(SimpleTestCase):
    def test_top_sets_scored_per_label(self):
        truth = [{0, 1}, {1}, {2}]
        predictions = [{0, 2}, {1}, {2}]

        micro, macro = micro_macro_f1(predictions, truth, (0, 1, 2), multilabel=True)

        # tp = 3, fp = 1, fn = 1
        self.assertAlmostEqual(micro, 6 / 8)
        self.assertAlmostEqual(macro, (1.0 + 2 / 3 + 2 / 3) / 3)

    def test_perfect_sets(self):
        truth = [{0, 3}, {1}, {2, 3}]

        self.assertEqual(micro_macro_f1(truth, truth, (0, 1, 2, 3), multilabel=True), (1.0, 1.0))
