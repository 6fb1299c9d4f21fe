"""
Sparse undirected weighted graphs.

A ``Graph`` owns the symmetric weight matrix W (CSR), the weighted degree
vector d and the map back to the node ids found in the source file. It
exposes the operators the diffusion code is built on: the column
stochastic transition H = W D^-1 (applied, never materialized), the
stationary distribution, the degree-normalized Laplacian quadratic form
and the two extremal eigenvalues of the normalized Laplacian.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .exceptions import (
    ConvergenceError,
    DegenerateGraphError,
    DisconnectedGraphError,
    GraphFormatError,
)

logger = logging.getLogger(__name__)

SPECTRAL_TOL = 1e-8
SPECTRAL_MAX_ITER = 100000


@dataclass(frozen=True)
class SpectralSummary:
    """Extremal eigenvalues of the normalized Laplacian."""

    mu2: float
    muN: float
    mu2_residual: float
    muN_residual: float
    iterations: int

    @property
    def mu_prime(self):
        return min(self.mu2, 2.0 - self.muN)


class Graph:
    """Immutable weighted undirected graph."""

    def __init__(self, adjacency, node_ids=None):
        weights = sparse.csr_matrix(adjacency, dtype=np.float64)
        weights.sum_duplicates()
        weights.eliminate_zeros()
        if weights.shape[0] != weights.shape[1]:
            raise GraphFormatError(
                "Adjacency matrix must be square, got %(shape)s.",
                params={"shape": weights.shape},
            )
        if weights.nnz and (
            not np.all(np.isfinite(weights.data)) or weights.data.min() <= 0
        ):
            raise GraphFormatError("Edge weights must be finite and positive.")
        asymmetry = abs(weights - weights.T)
        if asymmetry.nnz and asymmetry.max() > 1e-12 * max(weights.max(), 1.0):
            raise GraphFormatError("Adjacency matrix must be symmetric.")

        degrees = np.asarray(weights.sum(axis=0)).ravel()
        isolated = np.flatnonzero(degrees <= 0)
        if isolated.size:
            raise DegenerateGraphError(
                "Graph has %(count)d isolated node(s), e.g. index %(first)d.",
                params={"count": isolated.size, "first": int(isolated[0])},
            )

        if node_ids is None:
            node_ids = np.arange(weights.shape[0])
        node_ids = np.asarray(node_ids)
        if node_ids.shape != (weights.shape[0],):
            raise GraphFormatError("One node id is needed per adjacency row.")

        for array in (weights.data, weights.indices, weights.indptr, degrees, node_ids):
            array.flags.writeable = False
        self._weights = weights
        self._degrees = degrees
        self._node_ids = node_ids

    def __repr__(self):
        return f"<Graph N={self.num_nodes} |E|={self.num_edges}>"

    @classmethod
    def from_edges(cls, sources, targets, weights=None, node_ids=None):
        """Build a graph from undirected edges given as index arrays.

        Every edge (u, v, w) contributes w to both W_uv and W_vu (once for a
        self-loop); repeated edges have their weights summed.
        """
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        if weights is None:
            weights = np.ones(sources.shape[0])
        weights = np.asarray(weights, dtype=np.float64)
        if node_ids is None:
            num_nodes = int(max(sources.max(initial=-1), targets.max(initial=-1))) + 1
        else:
            num_nodes = len(node_ids)

        off_diagonal = sources != targets
        rows = np.concatenate([sources, targets[off_diagonal]])
        cols = np.concatenate([targets, sources[off_diagonal]])
        data = np.concatenate([weights, weights[off_diagonal]])
        adjacency = sparse.coo_matrix(
            (data, (rows, cols)), shape=(num_nodes, num_nodes)
        ).tocsr()
        return cls(adjacency, node_ids=node_ids)

    @property
    def adjacency(self):
        return self._weights

    @property
    def degrees(self):
        return self._degrees

    @property
    def node_ids(self):
        return self._node_ids

    @property
    def num_nodes(self):
        return self._weights.shape[0]

    @cached_property
    def num_edges(self):
        """Undirected edges, each counted once (self-loops included)."""
        return int(sparse.triu(self._weights).nnz)

    @cached_property
    def total_degree(self):
        return float(self._degrees.sum())

    @cached_property
    def _index_by_id(self):
        return {node_id: index for index, node_id in enumerate(self._node_ids.tolist())}

    def index_of(self, node_id):
        """Internal index of an original node id (KeyError if unknown)."""
        return self._index_by_id[node_id]

    def has_node_id(self, node_id):
        return node_id in self._index_by_id

    @cached_property
    def _edge_arrays(self):
        coo = self._weights.tocoo()
        return coo.row, coo.col, coo.data

    def apply_transition(self, x):
        """Return H x = W D^-1 x for a node vector or an N x m block."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            return self._weights @ (x / self._degrees)
        return self._weights @ (x / self._degrees[:, None])

    def stationary_distribution(self):
        return self._degrees / self.total_degree

    def laplacian_quadratic(self, x, y):
        """(D^-1 x)^T L (D^-1 y) via the edge-sum form."""
        u = np.asarray(x, dtype=np.float64) / self._degrees
        v = np.asarray(y, dtype=np.float64) / self._degrees
        rows, cols, weights = self._edge_arrays
        return 0.5 * float(np.sum(weights * (u[rows] - u[cols]) * (v[rows] - v[cols])))

    @cached_property
    def _components(self):
        return connected_components(self._weights, directed=False)

    @property
    def num_components(self):
        return int(self._components[0])

    @property
    def is_connected(self):
        return self.num_components == 1

    def largest_component(self):
        """The subgraph induced by the largest connected component."""
        count, membership = self._components
        if count == 1:
            return self
        largest = np.argmax(np.bincount(membership))
        keep = np.flatnonzero(membership == largest)
        logger.info(
            "Restricting graph to its largest component: %d of %d nodes.",
            keep.size,
            self.num_nodes,
        )
        return Graph(self._weights[keep][:, keep], node_ids=self._node_ids[keep])

    @cached_property
    def _normalized_adjacency(self):
        scale = sparse.diags(1.0 / np.sqrt(self._degrees))
        return (scale @ self._weights @ scale).tocsr()

    def spectral_summary(self, tol=SPECTRAL_TOL, max_iter=SPECTRAL_MAX_ITER):
        """Estimate mu_2 and mu_N of the normalized Laplacian by power iteration.

        mu_2 comes from the operator I + (I - L~) with the top eigenvector
        q1 = D^1/2 1 / sqrt(sum d) deflated; its spectrum 2 - mu_n is
        nonnegative, so the dominant remaining eigenvalue is 2 - mu_2.
        mu_N comes from L~ itself, whose spectrum lies in [0, 2].
        """
        if self.num_nodes < 2:
            raise DegenerateGraphError("Spectral summary needs at least two nodes.")
        if not self.is_connected:
            raise DisconnectedGraphError(
                "Graph has %(count)d connected components.",
                params={"count": self.num_components},
            )

        normalized = self._normalized_adjacency
        top = np.sqrt(self._degrees / self.total_degree)
        start = np.random.default_rng(0).standard_normal(self.num_nodes)

        rho2, residual2, iterations2 = _power_iteration(
            lambda v: v + normalized @ v, start, tol, max_iter, deflate=top
        )
        rhoN, residualN, iterationsN = _power_iteration(
            lambda v: v - normalized @ v, start, tol, max_iter
        )
        summary = SpectralSummary(
            mu2=2.0 - rho2,
            muN=rhoN,
            mu2_residual=residual2,
            muN_residual=residualN,
            iterations=iterations2 + iterationsN,
        )
        logger.debug(
            "Spectral summary mu2=%.6g muN=%.6g after %d iterations.",
            summary.mu2,
            summary.muN,
            summary.iterations,
        )
        return summary


def _power_iteration(operator, start, tol, max_iter, deflate=None):
    vector = start.copy()
    if deflate is not None:
        vector -= deflate * (deflate @ vector)
    vector /= np.linalg.norm(vector)

    residual = np.inf
    for iteration in range(1, max_iter + 1):
        image = operator(vector)
        if deflate is not None:
            image -= deflate * (deflate @ image)
        rho = float(vector @ image)
        residual = float(np.linalg.norm(image - rho * vector))
        if residual <= tol:
            return rho, residual, iteration
        norm = np.linalg.norm(image)
        if norm == 0.0:
            return 0.0, 0.0, iteration
        vector = image / norm

    raise ConvergenceError(
        f"Power iteration did not reach residual {tol:g} in {max_iter} iterations "
        f"(last residual {residual:.3g}).",
        iterate=vector,
        residual=residual,
        iterations=max_iter,
    )


def load_graph(stream):
    """Parse a whitespace-delimited edge list ("u v" or "u v w" per line).

    '#' starts a comment. Node ids are remapped to contiguous indices in
    increasing id order; the original ids stay available as ``node_ids``.
    """
    sources, targets, weights = [], [], []
    for line_number, raw_line in enumerate(stream, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise GraphFormatError(
                "Line %(line)d: expected 'u v' or 'u v w', got %(text)r.",
                params={"line": line_number, "text": raw_line.rstrip()},
            )
        try:
            u, v = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(
                "Line %(line)d: node ids must be integers and weights numbers.",
                params={"line": line_number},
            )
        if u < 0 or v < 0:
            raise GraphFormatError(
                "Line %(line)d: node ids must be nonnegative.",
                params={"line": line_number},
            )
        if not np.isfinite(w) or w <= 0:
            raise GraphFormatError(
                "Line %(line)d: edge weight must be positive, got %(weight)s.",
                params={"line": line_number, "weight": fields[2]},
            )
        sources.append(u)
        targets.append(v)
        weights.append(w)

    if not sources:
        raise DegenerateGraphError("Edge list contains no edges.")

    node_ids, inverse = np.unique(
        np.concatenate([sources, targets]), return_inverse=True
    )
    count = len(sources)
    graph = Graph.from_edges(
        inverse[:count], inverse[count:], weights, node_ids=node_ids
    )
    logger.info("Loaded graph with N=%d, |E|=%d.", graph.num_nodes, graph.num_edges)
    return graph
