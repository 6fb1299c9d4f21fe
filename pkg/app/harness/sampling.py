"""
Seeded draws of labeled sets and label corruption.

Every function takes an explicit seed (anything ``numpy.random.default_rng``
accepts), so a trial is reproducible from its seed alone.
"""
import logging

import numpy as np

from core.exceptions import LabelError, SamplingError

logger = logging.getLogger(__name__)

MAX_RETRIES = 100


def class_balanced_sample(labels, per_class, rng_seed):
    """``per_class`` nodes of every class, uniformly without replacement."""
    if labels.multilabel:
        raise LabelError("Class-balanced sampling needs a multiclass label set.")
    if per_class < 1:
        raise SamplingError("per_class must be at least 1.")
    rng = np.random.default_rng(rng_seed)
    chosen = []
    for label in labels.classes_in_use:
        members = labels.class_seeds(label)
        if members.size < per_class:
            raise SamplingError(
                "Class %(label)s has only %(size)d node(s); %(per_class)d requested.",
                params={"label": label, "size": members.size, "per_class": per_class},
            )
        chosen.append(rng.choice(members, per_class, replace=False))
    return labels.subset(np.concatenate(chosen))


def uniform_sample(labels, fraction, rng_seed):
    """floor(fraction * N) labeled nodes, redrawn until every class keeps a seed."""
    if not 0 < fraction < 1:
        raise SamplingError("fraction must lie in (0, 1).")
    size = int(np.floor(fraction * labels.num_nodes))
    if size < 1 or size > len(labels):
        raise SamplingError(
            "Cannot draw %(size)d nodes from %(count)d labeled nodes.",
            params={"size": size, "count": len(labels)},
        )

    required = set(labels.classes_in_use)
    for attempt in range(MAX_RETRIES):
        rng = np.random.default_rng([rng_seed, attempt])
        sample = labels.subset(rng.choice(labels.nodes, size, replace=False))
        if set(sample.classes_in_use) == required:
            if attempt:
                logger.debug("Uniform sample accepted after %d redraw(s).", attempt)
            return sample
    raise SamplingError(
        "No sample of %(size)d nodes covered every class in %(retries)d attempts.",
        params={"size": size, "retries": MAX_RETRIES},
    )


def corrupt_labels(sample, p_cor, rng_seed):
    """Flip each label with probability p_cor to a uniformly drawn other class.

    Returns the corrupted set and the node indices whose label changed.
    """
    if not 0 <= p_cor <= 1:
        raise ValueError("p_cor must lie in [0, 1].")
    if sample.multilabel:
        raise LabelError("Label corruption needs a multiclass label set.")
    rng = np.random.default_rng(rng_seed)
    flipped = sample.nodes[rng.random(len(sample)) < p_cor]
    if flipped.size and len(sample.classes) < 2:
        raise LabelError("Corruption needs at least two classes.")

    changes = {}
    for node in flipped.tolist():
        others = [label for label in sample.classes if label != sample.label_of(node)]
        changes[node] = others[rng.integers(len(others))]
    return sample.relabel(changes), set(changes)
