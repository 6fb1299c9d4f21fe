"""
Benchmark datasets: an edge list plus a ground-truth label file.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from pathlib import Path

from core.exceptions import DatasetMismatchError, LabelError
from core.graph import load_graph
from diffusion.labels import LabeledSet

logger = logging.getLogger(__name__)

DatasetStats = namedtuple("DatasetStats", ["nodes", "edges", "classes"])

# Published sizes. The citation graphs count every edge once per direction.
KNOWN_DATASETS = {
    "citeseer": DatasetStats(3233, 9464, 6),
    "cora": DatasetStats(2708, 10858, 7),
    "pubmed": DatasetStats(19717, 88676, 3),
    "ppi": DatasetStats(3890, 76584, 50),
    "wikipedia": DatasetStats(4733, 184182, 40),
    "blogcatalog": DatasetStats(10312, 333983, 39),
}
BOTH_DIRECTIONS = {"citeseer", "cora", "pubmed"}
MULTILABEL_DATASETS = {"ppi", "wikipedia", "blogcatalog"}


def load_labels(stream, graph):
    """Parse "node label" lines into {node index: set of class ids}.

    A node id listed more than once carries several labels. Ids that are
    not nodes of ``graph`` are skipped with a warning.
    """
    labels = {}
    skipped = 0
    for line_number, raw_line in enumerate(stream, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if len(fields) != 2:
                raise ValueError
            node_id, label = int(fields[0]), int(fields[1])
        except ValueError:
            raise LabelError(
                "Line %(line)d: expected 'node label' integers, got %(text)r.",
                params={"line": line_number, "text": raw_line.rstrip()},
            )
        if not graph.has_node_id(node_id):
            skipped += 1
            continue
        labels.setdefault(graph.index_of(node_id), set()).add(label)

    if skipped:
        logger.warning("Skipped %d label line(s) for nodes outside the graph.", skipped)
    if not labels:
        raise LabelError("Label file assigns no labels to graph nodes.")
    return labels


@dataclass
class Dataset:
    name: str
    graph: object
    labels: LabeledSet
    metadata: dict = field(default_factory=dict)

    @property
    def multilabel(self):
        return self.labels.multilabel

    @property
    def stats(self):
        edges = self.graph.adjacency.nnz if self.name in BOTH_DIRECTIONS else self.graph.num_edges
        return DatasetStats(self.graph.num_nodes, edges, len(self.labels.classes))

    def validate(self):
        """Compare with the published sizes of a known dataset."""
        expected = KNOWN_DATASETS.get(self.name)
        if expected is None:
            return
        actual = self.stats
        diff = [
            f"{field_name}: expected {want}, got {got}"
            for field_name, want, got in zip(DatasetStats._fields, expected, actual)
            if want != got
        ]
        if diff:
            raise DatasetMismatchError(
                "Dataset %(name)s does not match its published statistics (%(diff)s).",
                params={"name": self.name, "diff": "; ".join(diff)},
            )


def dataset_name(edges_path):
    return Path(edges_path).stem.lower()


def load_dataset(edges_path, labels_path, name=None, largest_component=False, validate=True):
    """Read a dataset from disk.

    ``name`` defaults to the stem of the edge file. Known datasets are
    checked against their published sizes unless the graph is restricted
    to its largest component.
    """
    name = name or dataset_name(edges_path)
    with open(edges_path) as stream:
        graph = load_graph(stream)
    full_size = graph.num_nodes
    if largest_component:
        graph = graph.largest_component()
    with open(labels_path) as stream:
        assignments = load_labels(stream, graph)

    multilabel = any(len(labels) > 1 for labels in assignments.values())
    if name in MULTILABEL_DATASETS:
        multilabel = True
    if not multilabel:
        assignments = {node: next(iter(labels)) for node, labels in assignments.items()}
    labels = LabeledSet(graph.num_nodes, assignments, multilabel=multilabel)

    dataset = Dataset(
        name=name,
        graph=graph,
        labels=labels,
        metadata={
            "largest_component": largest_component,
            "full_num_nodes": full_size,
            "labeled_nodes": len(labels),
        },
    )
    logger.info(
        "Loaded dataset %s: N=%d |E|=%d |Y|=%d (%s).",
        name,
        graph.num_nodes,
        dataset.stats.edges,
        len(labels.classes),
        "multilabel" if multilabel else "multiclass",
    )
    if validate and not largest_component:
        dataset.validate()
    return dataset
