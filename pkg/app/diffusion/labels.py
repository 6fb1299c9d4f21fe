"""
Labeled node sets.
"""
import numpy as np

from core.exceptions import LabelError
from core.walks import seed_vector


class LabeledSet:
    """Labeled nodes (internal indices) and their classes.

    ``assignments`` maps a node index to a class id (multiclass) or to an
    iterable of class ids (multilabel). ``classes`` is the class universe
    Y; it defaults to the classes that appear in ``assignments``.
    """

    def __init__(self, num_nodes, assignments, classes=None, multilabel=False):
        label_sets = {}
        for node, labels in assignments.items():
            labels = frozenset(labels) if multilabel else frozenset([labels])
            if not labels:
                raise LabelError(
                    "Node %(node)s has no labels.", params={"node": node}
                )
            label_sets[int(node)] = labels

        self.num_nodes = num_nodes
        self.multilabel = multilabel
        self.nodes = np.array(sorted(label_sets), dtype=np.int64)
        if self.nodes.size and (self.nodes[0] < 0 or self.nodes[-1] >= num_nodes):
            raise LabelError(
                "Labeled node index out of range for %(n)d nodes.",
                params={"n": num_nodes},
            )
        self._labels = label_sets

        used = set().union(*label_sets.values()) if label_sets else set()
        self.classes = tuple(sorted(used if classes is None else set(classes)))
        unknown = used - set(self.classes)
        if unknown:
            raise LabelError(
                "Labels %(labels)s are outside the class universe.",
                params={"labels": sorted(unknown)},
            )

    def __len__(self):
        return self.nodes.size

    def __contains__(self, node):
        return int(node) in self._labels

    def __repr__(self):
        kind = "multilabel" if self.multilabel else "multiclass"
        return f"<LabeledSet {kind} |L|={len(self)} |Y|={len(self.classes)}>"

    def labels_of(self, node):
        return self._labels[int(node)]

    def label_of(self, node):
        """The single class of a node in a multiclass set."""
        if self.multilabel:
            raise LabelError("label_of is only defined for multiclass sets.")
        (label,) = self._labels[int(node)]
        return label

    def assignments(self):
        if self.multilabel:
            return {node: set(labels) for node, labels in self._labels.items()}
        return {node: self.label_of(node) for node in self._labels}

    def class_seeds(self, label):
        """Sorted node indices of L_c."""
        return np.array(
            [node for node in self.nodes.tolist() if label in self._labels[node]],
            dtype=np.int64,
        )

    @property
    def classes_in_use(self):
        used = set().union(*self._labels.values()) if self._labels else set()
        return tuple(label for label in self.classes if label in used)

    def seed_vector(self, label):
        return seed_vector(self.num_nodes, self.class_seeds(label))

    def indicator(self, label):
        """y_{L_c}: 1 on L_c, 0 elsewhere (length N)."""
        vector = np.zeros(self.num_nodes)
        vector[self.class_seeds(label)] = 1.0
        return vector

    def target(self, label):
        """Normalized indicator (1 / |L|) y_{L_c} at the labeled rows only."""
        members = np.array([label in self._labels[node] for node in self.nodes.tolist()])
        return members / len(self)

    def label_matrix(self):
        """|L| x |Y| zero-one matrix of the labeled rows."""
        matrix = np.zeros((len(self), len(self.classes)))
        column = {label: index for index, label in enumerate(self.classes)}
        for row, node in enumerate(self.nodes.tolist()):
            for label in self._labels[node]:
                matrix[row, column[label]] = 1.0
        return matrix

    def label_counts(self):
        return np.array([len(self._labels[node]) for node in self.nodes.tolist()])

    def unlabeled(self):
        """Indices of U = V minus L."""
        mask = np.ones(self.num_nodes, dtype=bool)
        mask[self.nodes] = False
        return np.flatnonzero(mask)

    def subset(self, nodes):
        """A new set restricted to ``nodes`` with the same class universe."""
        keep = {int(node) for node in nodes}
        labels = {
            node: (set(labels) if self.multilabel else next(iter(labels)))
            for node, labels in self._labels.items()
            if node in keep
        }
        return LabeledSet(self.num_nodes, labels, self.classes, self.multilabel)

    def without(self, nodes):
        drop = {int(node) for node in nodes}
        return self.subset(node for node in self._labels if node not in drop)

    def relabel(self, changes):
        """A new multiclass set with ``changes`` (node -> class) applied."""
        if self.multilabel:
            raise LabelError("Relabeling is only defined for multiclass sets.")
        labels = self.assignments()
        labels.update({int(node): label for node, label in changes.items()})
        return LabeledSet(self.num_nodes, labels, self.classes)
