"""
Tests for system assembly, the diffusion classifiers and prediction.
"""
import numpy as np
from django.test import SimpleTestCase
from scipy import sparse
from scipy.linalg import expm

from core.exceptions import LabelError
from core.graph import Graph
from core.optim import FIXED, HYPERPLANE, SIMPLEX, QuadraticSystem, solve_simplex_qp
from core.tests.graphs import (
    barbell_graph,
    dense_transition,
    dense_walk,
    random_connected_graph,
)
from core.walks import dictionary_diffusions, landing_probabilities
from diffusion.classifiers import (
    ClassDiffusion,
    assemble_system,
    fit_adadif,
    fit_fixed,
    kstep_classifier,
    label_propagation,
    predict,
    predict_by_rank,
    predict_top,
)
from diffusion.coefficients import HyperParams, hk_coefficients, ppr_coefficients
from diffusion.labels import LabeledSet

BARBELL_LABELS = LabeledSet(10, {0: 0, 9: 1})
LEFT, RIGHT = [1, 2, 3, 4], [5, 6, 7, 8]


def lazy(graph):
    """Add self-loops of weight d_i so every walk eigenvalue is nonnegative."""
    return Graph(graph.adjacency + sparse.diags(graph.degrees))


def random_labels(n, rng, per_class=3, num_classes=2):
    nodes = rng.choice(n, size=per_class * num_classes, replace=False)
    return LabeledSet(n, {int(node): index // per_class for index, node in enumerate(nodes)})


def dense_system(graph, labels, label, K, lam):
    P = dense_walk(graph, labels.seed_vector(label), K)
    return dense_basis_system(graph, labels, label, P, lam)


def dense_basis_system(graph, labels, label, P, lam):
    """A and b over the columns of P from explicit D_L^+, D^-1 and L matrices."""
    labeled_inverse = np.zeros(graph.num_nodes)
    labeled_inverse[labels.nodes] = 1.0 / graph.degrees[labels.nodes]
    D_plus = np.diag(labeled_inverse)
    D_inv = np.diag(1.0 / graph.degrees)
    laplacian = np.diag(graph.degrees) - graph.adjacency.toarray()
    A = P.T @ (D_plus @ P + lam * D_inv @ laplacian @ D_inv @ P)
    b = -2.0 / len(labels) * P.T @ D_plus @ labels.indicator(label)
    return 0.5 * (A + A.T), b


class AssembleSystemTests(SimpleTestCase):
    def test_single_labeled_node_is_rank_one(self):
        graph = random_connected_graph(12, seed=1)
        labels = LabeledSet(12, {3: 0})
        P, P_tilde = landing_probabilities(graph, labels.seed_vector(0), 4)

        system = assemble_system(P, P_tilde, labels, 0, 0.0, graph)

        row = P[3]
        np.testing.assert_allclose(system.A, np.outer(row, row) / graph.degrees[3])
        self.assertLessEqual(np.linalg.matrix_rank(system.A), 1)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(0)
        for instance in range(100):
            n = int(rng.integers(8, 51))
            K = int(rng.integers(1, 7))
            lam = float(rng.uniform(0, 20))
            graph = random_connected_graph(n, seed=instance, weighted=True)
            labels = random_labels(n, rng)
            P, P_tilde = landing_probabilities(graph, labels.seed_vector(1), K)

            system = assemble_system(P, P_tilde, labels, 1, lam, graph)
            A, b = dense_system(graph, labels, 1, K, lam)

            np.testing.assert_allclose(system.A, A, atol=1e-10)
            np.testing.assert_allclose(system.b, b, atol=1e-10)

    def test_quadratic_matches_loss_plus_smoothness(self):
        rng = np.random.default_rng(1)
        graph = random_connected_graph(15, seed=5, weighted=True)
        labels = random_labels(15, rng)
        lam = 3.0
        P, P_tilde = landing_probabilities(graph, labels.seed_vector(0), 4)
        system = assemble_system(P, P_tilde, labels, 0, lam, graph)

        for _ in range(10):
            theta = rng.random(4)
            f = P @ theta
            target = labels.indicator(0) / len(labels)
            rows = labels.nodes
            loss = np.sum((target[rows] - f[rows]) ** 2 / graph.degrees[rows])
            smoothness = graph.laplacian_quadratic(f, f)
            constant = np.sum(target[rows] ** 2 / graph.degrees[rows])

            self.assertAlmostEqual(
                system.objective(theta) + constant, loss + lam * smoothness, delta=1e-10
            )

    def test_empty_labels_rejected(self):
        graph = random_connected_graph(6, seed=0)
        P, P_tilde = landing_probabilities(graph, np.full(6, 1 / 6), 2)

        with self.assertRaises(LabelError):
            assemble_system(P, P_tilde, LabeledSet(6, {}), 0, 1.0, graph)


class FitAdaDIFTests(SimpleTestCase):
    def test_barbell_sides_separate(self):
        graph = barbell_graph(5)

        diffusions = fit_adadif(graph, BARBELL_LABELS, HyperParams(K=10, lam=0.0))

        np.testing.assert_array_equal(predict(diffusions, LEFT), [0, 0, 0, 0])
        np.testing.assert_array_equal(predict(diffusions, RIGHT), [1, 1, 1, 1])

    def test_simplex_fit_gives_distributions(self):
        graph = random_connected_graph(40, seed=3)
        labels = random_labels(40, np.random.default_rng(3))

        for diffusion in fit_adadif(graph, labels, HyperParams(K=8, lam=15.0)):
            self.assertEqual(diffusion.coefficients.constraint, SIMPLEX)
            self.assertTrue(np.all(diffusion.scores >= -1e-12))
            self.assertAlmostEqual(diffusion.scores.sum(), 1.0, delta=1e-8)

    def test_strong_smoothing_selects_last_step(self):
        """Test that a huge lambda puts all weight on the last landing step."""
        rng = np.random.default_rng(4)
        K = 15
        for instance in range(10):
            n = int(rng.integers(20, 61))
            graph = lazy(random_connected_graph(n, density=0.15, seed=200 + instance))
            labels = random_labels(n, rng)

            for diffusion in fit_adadif(graph, labels, HyperParams(K=K, lam=1e6)):
                theta = diffusion.coefficients.theta
                self.assertLessEqual(np.max(np.abs(theta - np.eye(K)[-1])), 0.01)

    def test_strong_smoothing_on_plain_graphs(self):
        """Test that without the lazy loops a huge lambda only needs to beat the last step.

        A negative walk eigenvalue lets two late steps cancel each other, so
        the weight stays on late steps without settling on e_K alone.
        """
        rng = np.random.default_rng(4)
        K = 15
        split = False
        for instance in range(10):
            n = int(rng.integers(20, 61))
            graph = random_connected_graph(n, density=0.15, seed=200 + instance)
            labels = random_labels(n, rng)

            for diffusion in fit_adadif(graph, labels, HyperParams(K=K, lam=1e6)):
                theta = diffusion.coefficients.theta
                A, _ = dense_system(graph, labels, diffusion.label, K, 1.0)
                data, _ = dense_system(graph, labels, diffusion.label, K, 0.0)
                smoothness = A - data
                last = np.eye(K)[-1]
                self.assertLessEqual(
                    theta @ smoothness @ theta, last @ smoothness @ last + 1e-6
                )
                self.assertLessEqual(theta[: K // 2].sum(), 0.05)
                split |= np.max(np.abs(theta - last)) > 0.01
        self.assertTrue(split)

    def test_dictionary_mode(self):
        graph = random_connected_graph(30, seed=6)
        labels = random_labels(30, np.random.default_rng(6))
        params = HyperParams(K=10, lam=5.0, dictionary=True)
        dictionary = params.dictionary_matrix()

        for diffusion in fit_adadif(graph, labels, params):
            P, _ = landing_probabilities(graph, labels.seed_vector(diffusion.label), 10)
            self.assertEqual(len(diffusion.coefficients), 10)
            np.testing.assert_allclose(
                diffusion.scores, P @ diffusion.coefficients.theta, atol=1e-12
            )
            self.assertAlmostEqual(diffusion.scores.sum(), 1.0, delta=1e-8)

            F = dense_walk(graph, labels.seed_vector(diffusion.label), 10) @ dictionary
            oracle = QuadraticSystem(
                *dense_basis_system(graph, labels, diffusion.label, F, 5.0)
            )
            best = oracle.objective(solve_simplex_qp(oracle).theta)
            # objective over the K step weights depends on the dictionary weights only through C w
            A, b = dense_system(graph, labels, diffusion.label, 10, 5.0)
            theta = diffusion.coefficients.theta
            self.assertAlmostEqual(theta @ A @ theta + theta @ b, best, delta=1e-8)

    def test_dictionary_system_matches_dense_oracle(self):
        rng = np.random.default_rng(8)
        for instance in range(30):
            n = int(rng.integers(8, 41))
            K = int(rng.integers(2, 9))
            lam = float(rng.uniform(0, 20))
            graph = random_connected_graph(n, seed=300 + instance, weighted=True)
            labels = random_labels(n, rng)
            dictionary = rng.random((K, int(rng.integers(1, 5))))
            dictionary /= dictionary.sum(axis=0)
            F, shifted = dictionary_diffusions(
                graph, labels.seed_vector(0), K, dictionary, shifted=True
            )

            system = assemble_system(F, F - shifted, labels, 0, lam, graph)

            dense_F = dense_walk(graph, labels.seed_vector(0), K) @ dictionary
            A, b = dense_basis_system(graph, labels, 0, dense_F, lam)
            np.testing.assert_allclose(system.A, A, atol=1e-10)
            np.testing.assert_allclose(system.b, b, atol=1e-12)

    def test_unconstrained_mode(self):
        graph = random_connected_graph(30, seed=7)
        labels = random_labels(30, np.random.default_rng(7))

        diffusions = fit_adadif(
            graph, labels, HyperParams(K=6, lam=5.0, unconstrained=True, ridge=1e-6)
        )

        for diffusion in diffusions:
            self.assertEqual(diffusion.coefficients.constraint, HYPERPLANE)
            self.assertAlmostEqual(diffusion.coefficients.theta.sum(), 1.0, delta=1e-8)


class FitFixedTests(SimpleTestCase):
    def setUp(self):
        self.graph = random_connected_graph(40, seed=9, weighted=True)
        self.labels = random_labels(40, np.random.default_rng(9))

    def test_first_step_selector(self):
        diffusions = fit_fixed(self.graph, self.labels, np.eye(3)[0])

        for diffusion in diffusions:
            np.testing.assert_allclose(
                diffusion.scores,
                self.graph.apply_transition(self.labels.seed_vector(diffusion.label)),
            )

    def test_ppr_matches_resolvent(self):
        alpha = 0.5
        H = dense_transition(self.graph)

        for diffusion in fit_fixed(self.graph, self.labels, ppr_coefficients(alpha, 50)):
            v = self.labels.seed_vector(diffusion.label)
            resolvent = np.linalg.solve(np.eye(40) - alpha * H, v)
            oracle = (resolvent - v) * (1 - alpha) / alpha
            np.testing.assert_allclose(diffusion.scores, oracle, atol=1e-6)

    def test_ppr_matches_truncated_series(self):
        alpha, K = 0.98, 50
        weights = alpha ** np.arange(1, K + 1)

        for diffusion in fit_fixed(self.graph, self.labels, ppr_coefficients(alpha, K), K):
            columns = dense_walk(self.graph, self.labels.seed_vector(diffusion.label), K)
            oracle = columns @ weights / weights.sum()
            np.testing.assert_allclose(diffusion.scores, oracle, atol=1e-6)

    def test_hk_matches_matrix_exponential(self):
        t = 5.0
        H = dense_transition(self.graph)
        propagator = np.exp(t) * expm(-t * (np.eye(40) - H))

        for diffusion in fit_fixed(self.graph, self.labels, hk_coefficients(t, 50)):
            v = self.labels.seed_vector(diffusion.label)
            oracle = (propagator @ v - v) / (np.exp(t) - 1)
            np.testing.assert_allclose(diffusion.scores, oracle, atol=1e-6)

    def test_same_path_as_generic_weights(self):
        theta = ppr_coefficients(0.9, 12)

        fixed = fit_fixed(self.graph, self.labels, theta)
        generic = fit_fixed(self.graph, self.labels, np.array(theta.theta))

        for first, second in zip(fixed, generic):
            np.testing.assert_array_equal(first.scores, second.scores)
            self.assertEqual(first.coefficients.constraint, FIXED)


class KStepTests(SimpleTestCase):
    def test_one_hop_on_barbell(self):
        diffusions = kstep_classifier(barbell_graph(5), BARBELL_LABELS, 1)

        np.testing.assert_array_equal(predict(diffusions, LEFT + RIGHT), [0] * 4 + [1] * 4)

    def test_long_walks_reach_stationarity(self):
        graph = random_connected_graph(20, seed=2)
        labels = random_labels(20, np.random.default_rng(2))

        for diffusion in kstep_classifier(graph, labels, 500):
            np.testing.assert_allclose(
                diffusion.scores, graph.stationary_distribution(), atol=1e-8
            )


class LabelPropagationTests(SimpleTestCase):
    def test_labeled_rows_stay_clamped(self):
        graph = random_connected_graph(25, seed=4)
        labels = random_labels(25, np.random.default_rng(4))

        diffusions = label_propagation(graph, labels, iters=7)

        for diffusion in diffusions:
            np.testing.assert_array_equal(
                diffusion.scores[labels.nodes], labels.indicator(diffusion.label)[labels.nodes]
            )

    def test_fully_labeled_graph(self):
        graph = random_connected_graph(12, seed=5)
        truth = {node: node % 3 for node in range(12)}

        diffusions = label_propagation(graph, LabeledSet(12, truth))

        np.testing.assert_array_equal(predict(diffusions), [truth[i] for i in range(12)])

    def test_barbell_matches_dense_iteration(self):
        graph = barbell_graph(5)
        H = dense_transition(graph)
        scores = np.zeros((10, 2))
        scores[[0, 9]] = np.eye(2)
        for _ in range(50):
            scores = H @ scores
            scores[[0, 9]] = np.eye(2)

        diffusions = label_propagation(graph, BARBELL_LABELS)

        np.testing.assert_allclose(diffusions[0].scores, scores[:, 0], atol=1e-12)
        np.testing.assert_array_equal(predict(diffusions, LEFT + RIGHT), [0] * 4 + [1] * 4)


class PredictTests(SimpleTestCase):
    def test_single_class(self):
        diffusions = [ClassDiffusion(3, np.array([0.1, 0.0, 0.7]))]

        np.testing.assert_array_equal(predict(diffusions), [3, 3, 3])

    def test_ties_go_to_smallest_class(self):
        scores = np.array([0.2, 0.5, 0.3])
        diffusions = [ClassDiffusion(2, scores), ClassDiffusion(1, scores.copy())]

        np.testing.assert_array_equal(predict(diffusions), [1, 1, 1])

    def test_top_m(self):
        diffusions = [
            ClassDiffusion(1, np.array([0.5])),
            ClassDiffusion(2, np.array([0.3])),
            ClassDiffusion(3, np.array([0.2])),
        ]

        self.assertEqual(predict_top(diffusions, [0], [2]), [{1, 2}])

    def test_scale_invariance(self):
        rng = np.random.default_rng(0)
        diffusions = [ClassDiffusion(c, rng.random(30)) for c in range(4)]
        scaled = [ClassDiffusion(d.label, 7.5 * d.scores) for d in diffusions]

        np.testing.assert_array_equal(predict(diffusions), predict(scaled))

    def test_rank_rounding(self):
        """Test that a class with uniformly small scores still wins its top-ranked nodes."""
        graph = random_connected_graph(6, seed=0)
        degrees = graph.degrees
        strong = np.array([6.0, 5.0, 4.0, 3.0, 2.0, 1.0]) * degrees
        weak = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]) * degrees * 1e-3
        diffusions = [ClassDiffusion(0, strong), ClassDiffusion(1, weak)]

        np.testing.assert_array_equal(predict(diffusions), [0] * 6)
        np.testing.assert_array_equal(
            predict_by_rank(diffusions, graph), [0, 0, 0, 1, 1, 1]
        )
