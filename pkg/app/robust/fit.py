"""
Robust diffusions with joint outlier detection.

Leave-one-out residuals are modeled as ȳ + o - R θ with a row-sparse
outlier matrix O. Sweeps alternate a per-class simplex QP in θ with a
row-group soft-threshold in O; labeled nodes whose O row survives are
reported as outliers and dropped from the seeds before the final
diffusions are computed.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from core.optim import (
    SIMPLEX,
    CoefficientVector,
    QuadraticSystem,
    row_group_soft_threshold,
    solve_simplex_qp,
)
from core.walks import landing_probabilities
from diffusion.classifiers import ClassDiffusion

from .loo import build_loo_matrix

logger = logging.getLogger(__name__)

K_DEFAULT = 50
LAMBDA_THETA = 67.5e-5
LAMBDA_O = 14.6e-3
EPS = 1e-4
MAX_SWEEPS = 100


def robust_loss(R, labels, label, o, theta, graph):
    """||D_L^-1/2 (o + ȳ_c - R_c θ)||² over the labeled rows."""
    residual = np.asarray(o) + labels.target(label) - R.matrix @ np.asarray(theta)
    return float(np.sum(residual**2 / graph.degrees[R.rows]))


@dataclass
class RobustFit:
    labels: object
    classes: tuple
    coefficients: dict
    outliers: np.ndarray
    outlier_nodes: np.ndarray
    removed_nodes: np.ndarray
    diffusions: list
    objective_trace: list = field(default_factory=list)
    sweeps: int = 0
    converged: bool = False


class RobustProblem:
    """Leave-one-out matrices of one labeled set, reusable across penalties."""

    def __init__(self, graph, labels, K=K_DEFAULT):
        self.graph = graph
        self.labels = labels
        self.K = K
        self.classes = labels.classes_in_use
        self.matrices = [build_loo_matrix(graph, labels, c, K) for c in self.classes]
        self.inverse_degrees = 1.0 / graph.degrees[labels.nodes]
        self.targets = np.column_stack([labels.target(c) for c in self.classes])
        # lone seeds of single-seed classes have no held-out walk and stay unflagged
        lone = [R.lone_seed for R in self.matrices if R.lone_seed is not None]
        self.protected = np.isin(labels.nodes, lone)

    def residuals(self, thetas):
        """Ỹ = ȳ - R θ, one column per class."""
        return self.targets - np.column_stack(
            [R.matrix @ theta for R, theta in zip(self.matrices, thetas)]
        )

    def objective(self, thetas, outliers, lambda_theta, lambda_o):
        misfit = outliers + self.residuals(thetas)
        loss = np.sum(misfit**2 * self.inverse_degrees[:, None])
        penalty = lambda_theta * sum(float(theta @ theta) for theta in thetas)
        group = np.linalg.norm(outliers, axis=1) * np.sqrt(self.inverse_degrees)
        return float(loss + penalty + lambda_o * group.sum())

    def theta_step(self, outliers, lambda_theta, tol, max_iter):
        thetas = []
        for column, R in enumerate(self.matrices):
            weighted = R.matrix * self.inverse_degrees[:, None]
            A = R.matrix.T @ weighted + lambda_theta * np.eye(self.K)
            b = -2.0 * weighted.T @ (self.targets[:, column] + outliers[:, column])
            thetas.append(solve_simplex_qp(QuadraticSystem(A, b), tol, max_iter).theta)
        return thetas

    def outlier_step(self, thetas, lambda_o, exact_prox):
        residuals = self.residuals(thetas)
        if exact_prox:
            weights = 1.0 / np.sqrt(self.inverse_degrees)
            outliers = -row_group_soft_threshold(residuals, lambda_o, row_weights=weights)
        else:
            outliers = row_group_soft_threshold(residuals, lambda_o)
        outliers[self.protected] = 0.0
        return outliers

    def alternate(
        self,
        lambda_theta=LAMBDA_THETA,
        lambda_o=LAMBDA_O,
        eps=EPS,
        max_sweeps=MAX_SWEEPS,
        exact_prox=False,
        tol=1e-9,
        max_iter=10000,
    ):
        """Run the sweeps; returns (thetas, O, objective trace, sweeps, converged)."""
        outliers = np.zeros_like(self.targets)
        previous = None
        trace = []
        for sweep in range(1, max_sweeps + 1):
            thetas = self.theta_step(outliers, lambda_theta, tol, max_iter)
            outliers = self.outlier_step(thetas, lambda_o, exact_prox)
            trace.append(self.objective(thetas, outliers, lambda_theta, lambda_o))
            if previous is not None:
                change = max(np.max(np.abs(t - p)) for t, p in zip(thetas, previous))
                if change <= eps:
                    return thetas, outliers, trace, sweep, True
            previous = thetas
        logger.debug("Robust sweeps stopped at the cap of %d.", max_sweeps)
        return thetas, outliers, trace, max_sweeps, False


def _preserve_seeds(labels, classes, flagged, row_norms):
    """Nodes to drop: flagged nodes, except the least anomalous seed of a class that would lose all."""
    row_of = {node: row for row, node in enumerate(labels.nodes.tolist())}
    keep = set()
    for label in classes:
        seeds = labels.class_seeds(label).tolist()
        if seeds and all(node in flagged for node in seeds):
            survivor = min(seeds, key=lambda node: row_norms[row_of[node]])
            keep.add(survivor)
            logger.warning(
                "Every seed of class %s was flagged; keeping node %d.", label, survivor
            )
    return np.array(sorted(flagged - keep), dtype=np.int64)


def fit_radadif(
    graph,
    labels,
    K=K_DEFAULT,
    lambda_theta=LAMBDA_THETA,
    lambda_o=LAMBDA_O,
    eps=EPS,
    max_sweeps=MAX_SWEEPS,
    exact_prox=False,
    problem=None,
):
    """Robust fit, outlier extraction and refit on the cleaned seeds.

    Pass a ``RobustProblem`` built for the same graph, labels and K to
    reuse its leave-one-out matrices across calls.
    """
    problem = problem or RobustProblem(graph, labels, K)
    thetas, outliers, trace, sweeps, converged = problem.alternate(
        lambda_theta, lambda_o, eps, max_sweeps, exact_prox
    )

    row_norms = np.linalg.norm(outliers, axis=1)
    outlier_nodes = labels.nodes[row_norms > 0]
    removed = _preserve_seeds(labels, problem.classes, set(outlier_nodes.tolist()), row_norms)
    cleaned = labels.without(removed)
    logger.info(
        "Robust fit flagged %d of %d labeled nodes after %d sweep(s).",
        outlier_nodes.size,
        len(labels),
        sweeps,
    )

    coefficients = {}
    diffusions = []
    for label, theta in zip(problem.classes, thetas):
        coefficients[label] = CoefficientVector(theta, SIMPLEX)
        P, _ = landing_probabilities(graph, cleaned.seed_vector(label), problem.K)
        diffusions.append(ClassDiffusion(label, P @ theta, coefficients[label]))

    return RobustFit(
        labels=labels,
        classes=problem.classes,
        coefficients=coefficients,
        outliers=outliers,
        outlier_nodes=outlier_nodes,
        removed_nodes=removed,
        diffusions=diffusions,
        objective_trace=trace,
        sweeps=sweeps,
        converged=converged,
    )


def detection_counts(fit, true_outliers):
    """(probability of detection, probability of false alarm)."""
    labeled = set(fit.labels.nodes.tolist())
    truth = {int(node) for node in true_outliers}
    if not truth <= labeled:
        raise ValueError("True outliers must be labeled nodes.")
    detected = set(fit.outlier_nodes.tolist())
    clean = labeled - truth
    p_d = len(detected & truth) / len(truth) if truth else 0.0
    p_fa = len(detected - truth) / len(clean) if clean else 0.0
    return p_d, p_fa
