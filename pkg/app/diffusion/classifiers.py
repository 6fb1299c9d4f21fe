"""
Diffusion-based classifiers.

Every classifier returns one ``ClassDiffusion`` per class in use, in
increasing class order; ``predict`` turns them into labels.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from core.exceptions import LabelError
from core.optim import (
    FIXED,
    CoefficientVector,
    QuadraticSystem,
    solve_hyperplane_qp,
    solve_simplex_qp,
)
from core.walks import dictionary_diffusions, landing_probabilities, validate_dictionary

from .coefficients import HyperParams

logger = logging.getLogger(__name__)

LP_ITERS = 50


@dataclass(frozen=True)
class ClassDiffusion:
    label: int
    scores: np.ndarray
    coefficients: CoefficientVector = None


def _require_labels(labels):
    if len(labels) == 0:
        raise LabelError("The labeled set is empty.")


def assemble_system(basis, differential, labels, label, lam, graph):
    """Quadratic system of the smoothness-regularized fit for one class.

    ``basis`` holds the diffusion columns (P, or F in dictionary mode) and
    ``differential`` the matching basis - H basis columns. With
    D_L^+ = diag(1/d) on labeled rows:

        A = basis_L^T D_L^+ basis_L + lam (D^-1 basis)^T differential
        b = -(2 / |L|) basis_L^T D_L^+ y_L
    """
    _require_labels(labels)
    rows = labels.nodes
    inverse_degrees = 1.0 / graph.degrees
    labeled = basis[rows]
    weighted = labeled * inverse_degrees[rows][:, None]

    A = labeled.T @ weighted
    if lam:
        A = A + lam * (basis * inverse_degrees[:, None]).T @ differential
    b = -2.0 * weighted.T @ labels.target(label)
    return QuadraticSystem(A, b)


def _solve(system, hp):
    if hp.unconstrained:
        return solve_hyperplane_qp(system, hp.ridge)
    return solve_simplex_qp(system, hp.tol, hp.max_iter)


def fit_adadif(graph, labels, hp=None, dictionary=None):
    """Learn class-specific diffusion coefficients.

    In dictionary mode the weights are learned over the dictionary columns;
    the reported coefficients are the implied per-step vector C theta.
    """
    _require_labels(labels)
    hp = hp or HyperParams()
    if hp.dictionary and dictionary is None:
        dictionary = hp.dictionary_matrix()
    if dictionary is not None:
        dictionary = validate_dictionary(dictionary, hp.K)

    diffusions = []
    for label in labels.classes_in_use:
        seeds = labels.seed_vector(label)
        if dictionary is None:
            basis, differential = landing_probabilities(graph, seeds, hp.K)
        else:
            basis, shifted = dictionary_diffusions(
                graph, seeds, hp.K, dictionary, shifted=True
            )
            differential = basis - shifted

        weights = _solve(assemble_system(basis, differential, labels, label, hp.lam, graph), hp)
        coefficients = weights
        if dictionary is not None:
            coefficients = CoefficientVector(dictionary @ weights.theta, weights.constraint)
        logger.debug("Class %s coefficients %s.", label, np.round(coefficients.theta, 4))
        diffusions.append(ClassDiffusion(label, basis @ weights.theta, coefficients))
    return diffusions


def fit_fixed(graph, labels, theta, K=None):
    """f_c = P_c theta with no learning."""
    _require_labels(labels)
    if not isinstance(theta, CoefficientVector):
        theta = CoefficientVector(theta, FIXED)
    if K is not None and K != theta.K:
        raise ValueError(f"theta has {theta.K} entries, expected K={K}.")

    diffusions = []
    for label in labels.classes_in_use:
        P, _ = landing_probabilities(graph, labels.seed_vector(label), theta.K)
        diffusions.append(ClassDiffusion(label, P @ theta.theta, theta))
    return diffusions


def kstep_classifier(graph, labels, k):
    """f_c = p_c^(k)."""
    _require_labels(labels)
    if k < 1:
        raise ValueError("k must be at least 1.")
    selector = CoefficientVector(np.eye(k)[-1], FIXED)
    return fit_fixed(graph, labels, selector)


def label_propagation(graph, labels, iters=LP_ITERS):
    """Iterate F <- H F and clamp labeled rows to their labels."""
    _require_labels(labels)
    if iters < 1:
        raise ValueError("iters must be at least 1.")
    classes = labels.classes_in_use
    clamped = labels.label_matrix()[:, [labels.classes.index(c) for c in classes]]
    scores = np.zeros((graph.num_nodes, len(classes)))
    scores[labels.nodes] = clamped
    for _ in range(iters):
        scores = graph.apply_transition(scores)
        scores[labels.nodes] = clamped
    return [ClassDiffusion(label, scores[:, index]) for index, label in enumerate(classes)]


def _score_matrix(diffusions, nodes):
    ordered = sorted(diffusions, key=lambda diffusion: diffusion.label)
    classes = np.array([diffusion.label for diffusion in ordered])
    scores = np.column_stack([diffusion.scores for diffusion in ordered])
    if nodes is not None:
        scores = scores[np.asarray(nodes, dtype=np.int64)]
    return classes, scores


def predict(diffusions, nodes=None):
    """Per-node argmax class; ties go to the smallest class id."""
    classes, scores = _score_matrix(diffusions, nodes)
    return classes[np.argmax(scores, axis=1)]


def predict_top(diffusions, nodes, counts):
    """The ``counts[i]`` highest-scoring classes of each node (multilabel)."""
    classes, scores = _score_matrix(diffusions, nodes)
    order = np.argsort(-scores, axis=1, kind="stable")
    return [set(classes[row[:count]].tolist()) for row, count in zip(order, counts)]


def predict_by_rank(diffusions, graph, nodes=None):
    """Rank rounding: degree-normalize, rank within each class, take the top rank."""
    classes, scores = _score_matrix(diffusions, None)
    ranks = rankdata(scores / graph.degrees[:, None], axis=0)
    if nodes is not None:
        ranks = ranks[np.asarray(nodes, dtype=np.int64)]
    return classes[np.argmax(ranks, axis=1)]

