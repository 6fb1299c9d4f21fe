"""
Random-walk landing probabilities.

All walks are exact power iterations of the transition operator of a
``Graph``; nothing here materializes H.
"""
import logging

import numpy as np

from .exceptions import DictionaryError, InsufficientSeedsError, LabelError

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-8


def seed_vector(num_nodes, seeds):
    """Uniform distribution over the seed set."""
    seeds = np.unique(np.asarray(seeds, dtype=np.int64))
    if seeds.size == 0:
        raise LabelError("Seed set is empty.")
    if seeds[0] < 0 or seeds[-1] >= num_nodes:
        raise LabelError(
            "Seed index out of range for a graph with %(n)d nodes.",
            params={"n": num_nodes},
        )
    vector = np.zeros(num_nodes)
    vector[seeds] = 1.0 / seeds.size
    return vector


def landing_probabilities(graph, seeds, K):
    """Return (P, P_tilde), both N x K.

    Column k - 1 of P is p^(k) = H^k v. The walk runs one step further so
    that every differential column p^(k) - p^(k+1) exists.
    """
    if K < 1:
        raise ValueError("K must be at least 1.")
    steps = np.empty((graph.num_nodes, K + 1))
    current = np.asarray(seeds, dtype=np.float64)
    for k in range(K + 1):
        current = graph.apply_transition(current)
        steps[:, k] = current
    return steps[:, :K], steps[:, :K] - steps[:, 1:]


def validate_dictionary(dictionary, K):
    dictionary = np.asarray(dictionary, dtype=np.float64)
    if dictionary.ndim != 2 or dictionary.shape[0] != K:
        raise DictionaryError(
            "Dictionary must have K=%(k)d rows, got shape %(shape)s.",
            params={"k": K, "shape": dictionary.shape},
        )
    sums = dictionary.sum(axis=0)
    off_simplex = (dictionary.min(axis=0) < -SIMPLEX_TOL) | (
        np.abs(sums - 1.0) > SIMPLEX_TOL
    )
    if np.any(off_simplex):
        raise DictionaryError(
            "Dictionary column(s) %(columns)s do not lie on the simplex.",
            params={"columns": np.flatnonzero(off_simplex).tolist()},
        )
    return dictionary


def dictionary_diffusions(graph, seeds, K, dictionary, shifted=False):
    """Accumulate F = P C in one pass over the walk (N x D).

    With ``shifted`` the pair (F, H F) is returned; H F costs one extra
    transition of the N x D block and stands in for the walk columns
    p^(2)..p^(K+1) that the smoothness term needs.
    """
    dictionary = validate_dictionary(dictionary, K)
    diffusions = np.zeros((graph.num_nodes, dictionary.shape[1]))
    current = np.asarray(seeds, dtype=np.float64)
    for k in range(K):
        current = graph.apply_transition(current)
        diffusions += np.outer(current, dictionary[k])
    if shifted:
        return diffusions, graph.apply_transition(diffusions)
    return diffusions


def leave_one_out_walks(graph, class_seeds, K, rows=None):
    """Walks seeded at L_c minus one node, for every node of L_c.

    Returns an array of shape (|L_c|, len(rows), K): entry [i, :, k - 1]
    holds H^k v_{L_c - i} restricted to ``rows`` (default: the seeds).
    All |L_c| walks advance together as one N x |L_c| block.
    """
    class_seeds = np.asarray(class_seeds, dtype=np.int64)
    count = class_seeds.size
    if count < 2 or np.unique(class_seeds).size != count:
        raise InsufficientSeedsError(
            "Leave-one-out walks need at least two distinct seeds, got %(count)d.",
            params={"count": count},
        )
    if rows is None:
        rows = class_seeds
    rows = np.asarray(rows, dtype=np.int64)

    block = np.zeros((graph.num_nodes, count))
    block[class_seeds, :] = 1.0 / (count - 1)
    block[class_seeds, np.arange(count)] = 0.0

    walks = np.empty((count, rows.size, K))
    for k in range(K):
        block = graph.apply_transition(block)
        walks[:, :, k] = block[rows].T
    return walks
