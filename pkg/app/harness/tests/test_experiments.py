"""
Tests for trials, experiments and sweeps on synthetic community graphs.
"""
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import LabelError
from core.tests.graphs import planted_partition_graph
from diffusion.classifiers import ClassDiffusion
from diffusion.labels import LabeledSet
from harness.datasets import Dataset
from harness.experiments import (
    MethodSpec,
    SamplingSpec,
    corruption_sweep,
    parameter_sweep,
    roc_sweep,
    run_experiment,
    run_trial,
    trial_seeds,
    unreachable_count,
)
from harness.tests.data import planted_dataset


def multilabel_dataset(block_size=30):
    """Block labels plus a shared label on every third node."""
    graph = planted_partition_graph(block_size, seed=7)
    assignments = {}
    for node in range(graph.num_nodes):
        labels = {node // block_size}
        if node % 3 == 0:
            labels.add(2)
        assignments[node] = labels
    labels = LabeledSet(graph.num_nodes, assignments, multilabel=True)
    return Dataset(name="planted-multilabel", graph=graph, labels=labels)


class MethodSpecTests(SimpleTestCase):
    def test_defaults_come_from_settings(self):
        self.assertEqual(MethodSpec("adadif").resolve().params(), {"K": 15, "lam": 15.0})
        self.assertEqual(
            MethodSpec("adadif").resolve(multilabel=True).params(), {"K": 10, "lam": 5.0}
        )
        self.assertEqual(MethodSpec("ppr").resolve().params(), {"K": 50, "alpha": 0.98})
        self.assertEqual(MethodSpec("lp").resolve().params(), {"iters": 50})

    def test_given_values_win(self):
        self.assertEqual(MethodSpec("hk", t=5.0).resolve().params(), {"K": 50, "t": 5.0})

    def test_zero_values_are_recorded(self):
        params = MethodSpec("radadif", lambda_o=0.0).resolve().params()

        self.assertEqual(params["lambda_o"], 0.0)

    def test_kstep_needs_k(self):
        with self.assertRaises(ValueError):
            MethodSpec("kstep").resolve()

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            MethodSpec("pagerank")


class SamplingSpecTests(SimpleTestCase):
    def test_modes_are_exclusive(self):
        with self.assertRaises(ValueError):
            SamplingSpec()
        with self.assertRaises(ValueError):
            SamplingSpec(per_class=5, fraction=0.1)

    def test_draw_reports_corrupted_nodes(self):
        truth = planted_dataset(block_size=20).labels

        sample, corrupted = SamplingSpec(per_class=10, p_cor=1.0).draw(truth, 3)

        self.assertEqual(corrupted, set(sample.nodes.tolist()))


class TrialTests(SimpleTestCase):
    def setUp(self):
        self.dataset = planted_dataset(block_size=40)

    def test_trial_scores_unlabeled_nodes_only(self):
        sampling = SamplingSpec(per_class=5)

        trial = run_trial(self.dataset, MethodSpec("ppr").resolve(), sampling, seed=11)

        self.assertEqual(trial.num_labeled, 10)
        self.assertEqual(trial.num_evaluated, 70)
        self.assertGreater(trial.micro_f1, 0.8)
        self.assertTrue(0 <= trial.macro_f1 <= 1)
        self.assertEqual(trial.unreachable, 0)

    def test_every_method_runs(self):
        sampling = SamplingSpec(per_class=6)
        for method in (
            MethodSpec("adadif"),
            MethodSpec("adadif", dictionary=True),
            MethodSpec("adadif", unconstrained=True),
            MethodSpec("radadif", K=10),
            MethodSpec("ppr"),
            MethodSpec("ppr_rank"),
            MethodSpec("hk"),
            MethodSpec("lp"),
            MethodSpec("kstep", k=3),
        ):
            trial = run_trial(self.dataset, method.resolve(), sampling, seed=5)

            self.assertGreater(trial.micro_f1, 0.5, method.name)

    def test_multilabel_trial(self):
        dataset = multilabel_dataset()

        trial = run_trial(
            dataset, MethodSpec("adadif").resolve(multilabel=True), SamplingSpec(fraction=0.3), seed=1
        )

        self.assertEqual(trial.num_labeled, 18)
        self.assertTrue(0 < trial.micro_f1 <= 1)

    def test_unreachable_count(self):
        diffusions = [
            ClassDiffusion(0, np.array([0.5, 0.0, 0.0, 0.1])),
            ClassDiffusion(1, np.array([0.0, 0.0, 0.2, 0.0])),
        ]

        self.assertEqual(unreachable_count(diffusions, np.array([0, 1, 2])), 1)
        self.assertEqual(unreachable_count(diffusions, np.array([3])), 0)


class ExperimentTests(SimpleTestCase):
    def setUp(self):
        self.dataset = planted_dataset(block_size=30)
        self.sampling = SamplingSpec(per_class=4)

    def test_trial_seeds_are_deterministic(self):
        self.assertEqual(trial_seeds(0, 5), trial_seeds(0, 5))
        self.assertEqual(trial_seeds(0, 5)[:3], trial_seeds(0, 3))
        self.assertNotEqual(trial_seeds(0, 3), trial_seeds(1, 3))

    def test_aggregates_use_sample_std(self):
        result = run_experiment(self.dataset, MethodSpec("ppr"), self.sampling, trials=4, seed=2)

        micro = np.array([trial.micro_f1 for trial in result.trials])
        self.assertEqual(len(result.trials), 4)
        self.assertAlmostEqual(result.micro_mean, micro.mean())
        self.assertAlmostEqual(result.micro_std, micro.std(ddof=1))
        self.assertEqual([trial.index for trial in result.trials], [0, 1, 2, 3])
        self.assertEqual(result.method.params(), {"K": 50, "alpha": 0.98})

    def test_single_trial_has_zero_std(self):
        result = run_experiment(self.dataset, MethodSpec("lp"), self.sampling, trials=1)

        self.assertEqual(result.micro_std, 0.0)
        self.assertEqual(result.macro_std, 0.0)

    def test_parallel_execution_gives_identical_trials(self):
        serial = run_experiment(self.dataset, MethodSpec("ppr"), self.sampling, 4, seed=3, jobs=1)
        parallel = run_experiment(self.dataset, MethodSpec("ppr"), self.sampling, 4, seed=3, jobs=2)

        for first, second in zip(serial.trials, parallel.trials):
            self.assertEqual(first.seed, second.seed)
            self.assertEqual(first.micro_f1, second.micro_f1)
            self.assertEqual(first.macro_f1, second.macro_f1)

    def test_parameter_sweep(self):
        results = parameter_sweep(
            self.dataset, MethodSpec("kstep", k=1), self.sampling, "k", [1, 4, 8], trials=2
        )

        self.assertEqual([result.method.k for result in results], [1, 4, 8])
        with self.assertRaises(ValueError):
            parameter_sweep(self.dataset, MethodSpec("ppr"), self.sampling, "seed", [1])

    def test_corruption_sweep_shares_draws(self):
        methods = [MethodSpec("ppr"), MethodSpec("hk")]

        results = corruption_sweep(
            self.dataset, methods, SamplingSpec(fraction=0.2), [0.0, 0.3], trials=2, seed=4
        )

        self.assertEqual(
            [(result.sampling.p_cor, result.method.name) for result in results],
            [(0.0, "ppr"), (0.0, "hk"), (0.3, "ppr"), (0.3, "hk")],
        )
        self.assertEqual(
            [trial.seed for trial in results[0].trials],
            [trial.seed for trial in results[3].trials],
        )


class RocSweepTests(SimpleTestCase):
    def setUp(self):
        self.dataset = planted_dataset(block_size=30, seed=5)
        self.sampling = SamplingSpec(per_class=15, p_cor=0.2)

    def test_extreme_penalties_reach_the_corners(self):
        points = roc_sweep(self.dataset, self.sampling, [0.0, 1e6], trials=3, K=10)

        self.assertEqual((points[0].p_fa, points[0].p_d), (0.0, 0.0))
        self.assertEqual(points[0].lambda_o, 1e6)
        self.assertEqual((points[-1].p_fa, points[-1].p_d), (1.0, 1.0))

    def test_points_sorted_by_false_alarms(self):
        grid = [0.0, 0.02, 0.05, 0.1, 1e6]

        points = roc_sweep(self.dataset, self.sampling, grid, trials=2, K=10)

        self.assertEqual(len(points), len(grid))
        rates = [point.p_fa for point in points]
        self.assertEqual(rates, sorted(rates))

    def test_multilabel_rejected(self):
        with self.assertRaises(LabelError):
            roc_sweep(multilabel_dataset(), SamplingSpec(fraction=0.2), [0.1], trials=1)
