"""
Small graphs and dense oracles shared by the test suites.
"""
import numpy as np

from core.graph import Graph


def path_graph(n=3):
    return Graph.from_edges(np.arange(n - 1), np.arange(1, n))


def triangle_graph():
    return Graph.from_edges([0, 1, 2], [1, 2, 0])


def complete_graph(n):
    sources, targets = np.triu_indices(n, k=1)
    return Graph.from_edges(sources, targets)


def cycle_graph(n):
    return Graph.from_edges(np.arange(n), (np.arange(n) + 1) % n)


def barbell_graph(size=5):
    """Two cliques of ``size`` nodes joined by the edge (size - 1, size)."""
    sources, targets = np.triu_indices(size, k=1)
    sources = np.concatenate([sources, sources + size, [size - 1]])
    targets = np.concatenate([targets, targets + size, [size]])
    return Graph.from_edges(sources, targets)


def random_connected_graph(n, density=0.2, seed=0, weighted=False, self_loops=False):
    """Random connected non-bipartite graph.

    A random spanning path guarantees connectivity and a triangle on its
    first three nodes rules out bipartiteness.
    """
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    sources = [order[:-1], [order[0]]]
    targets = [order[1:], [order[2]]]
    upper_s, upper_t = np.triu_indices(n, k=1)
    extra = rng.random(upper_s.size) < density
    sources.append(upper_s[extra])
    targets.append(upper_t[extra])
    if self_loops:
        sources.append(np.arange(n))
        targets.append(np.arange(n))
    sources = np.concatenate(sources)
    targets = np.concatenate(targets)
    weights = rng.uniform(0.5, 2.0, sources.size) if weighted else None
    return Graph.from_edges(sources, targets, weights)


def planted_partition_graph(block_size, p_in=0.6, p_out=0.05, seed=0, self_loops=True):
    """Two dense blocks with sparse cross edges; nodes [0, block_size) form block one."""
    rng = np.random.default_rng(seed)
    n = 2 * block_size
    upper_s, upper_t = np.triu_indices(n, k=1)
    same_block = (upper_s < block_size) == (upper_t < block_size)
    keep = rng.random(upper_s.size) < np.where(same_block, p_in, p_out)
    sources = [upper_s[keep], np.arange(n - 1)]
    targets = [upper_t[keep], np.arange(1, n)]
    if self_loops:
        sources.append(np.arange(n))
        targets.append(np.arange(n))
    return Graph.from_edges(np.concatenate(sources), np.concatenate(targets))


def dense_transition(graph):
    """H = W D^-1 as a dense array."""
    return graph.adjacency.toarray() / graph.degrees[None, :]


def dense_normalized_laplacian(graph):
    scale = 1.0 / np.sqrt(graph.degrees)
    return np.eye(graph.num_nodes) - scale[:, None] * graph.adjacency.toarray() * scale[None, :]


def dense_walk(graph, start, K):
    """Columns H^1 v .. H^K v by dense matrix powers."""
    H = dense_transition(graph)
    columns = [np.linalg.matrix_power(H, k) @ start for k in range(1, K + 1)]
    return np.column_stack(columns)
