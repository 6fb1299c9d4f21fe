"""
Leave-one-out landing probabilities at the labeled nodes.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import InsufficientSeedsError
from core.walks import landing_probabilities, leave_one_out_walks


@dataclass(frozen=True)
class LeaveOneOutMatrix:
    """R_c: one row per labeled node, one column per walk step.

    Row i holds p^(k)_{L_c - i} at i when i is a seed of the class and the
    full-seed p_c^(k) at i otherwise. A class with a single seed has no
    walk to hold it out of, so its seed keeps the full-seed row and is
    listed in ``lone_seed``.
    """

    label: int
    rows: np.ndarray
    matrix: np.ndarray
    lone_seed: int = None

    @property
    def K(self):
        return self.matrix.shape[1]


def build_loo_matrix(graph, labels, label, K):
    seeds = labels.class_seeds(label)
    if seeds.size == 0:
        raise InsufficientSeedsError(
            "Class %(label)s has no labeled nodes.", params={"label": label}
        )
    rows = labels.nodes
    P, _ = landing_probabilities(graph, labels.seed_vector(label), K)
    matrix = P[rows]
    if seeds.size == 1:
        return LeaveOneOutMatrix(label, rows, matrix, lone_seed=int(seeds[0]))

    walks = leave_one_out_walks(graph, seeds, K, rows=seeds)
    held_out = np.arange(seeds.size)
    matrix[np.searchsorted(rows, seeds)] = walks[held_out, held_out]
    return LeaveOneOutMatrix(label, rows, matrix)
