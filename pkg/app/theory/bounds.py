"""
How many landing steps can still tell two classes apart.

For two seed sets the classifier output changes by the step-K discrepancy
when the K-th landing column is swapped for the (K+1)-th. Over simplex
coefficients that change is largest at theta = e_K, where it equals

    ||(p+^(K) - p-^(K)) - (p+^(K+1) - p-^(K+1))||.

The closed-form bounds below follow from ||H^K v+ - H^K v-|| decaying as
e^(-K mu') with mu' = min(mu_2, 2 - mu_N).
"""
import math
from dataclasses import dataclass

import numpy as np

from core.exceptions import SpectralGapError
from core.walks import landing_probabilities, seed_vector

# mu' at or below this is treated as a missing gap
GAP_TOL = 1e-8


@dataclass(frozen=True)
class BoundInputs:
    gamma: float
    d_max: float
    d_min_plus: float
    d_min_minus: float
    n_plus: int
    n_minus: int
    mu_prime: float
    alpha: float = None

    def __post_init__(self):
        for name in ("gamma", "d_max", "d_min_plus", "d_min_minus", "n_plus", "n_minus"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive.")
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1).")

    @classmethod
    def from_graph(cls, graph, seeds_plus, seeds_minus, gamma, summary=None, alpha=None):
        """Degrees and seed counts from ``graph``; mu' from its spectral summary."""
        seeds_plus = np.unique(seeds_plus)
        seeds_minus = np.unique(seeds_minus)
        summary = summary or graph.spectral_summary()
        return cls(
            gamma=gamma,
            d_max=float(graph.degrees.max()),
            d_min_plus=float(graph.degrees[seeds_plus].min()),
            d_min_minus=float(graph.degrees[seeds_minus].min()),
            n_plus=seeds_plus.size,
            n_minus=seeds_minus.size,
            mu_prime=summary.mu_prime,
            alpha=alpha,
        )

    @property
    def seed_spread(self):
        return 1.0 / math.sqrt(self.d_min_minus * self.n_minus) + 1.0 / math.sqrt(
            self.d_min_plus * self.n_plus
        )

    def require_gap(self):
        if self.mu_prime <= GAP_TOL:
            raise SpectralGapError(
                "mu' = %(mu)g: the graph is bipartite or disconnected, no bound exists.",
                params={"mu": self.mu_prime},
            )


def _ceil_floored(value):
    return max(1, math.ceil(value))


def kgamma_bound(inputs):
    inputs.require_gap()
    argument = 2.0 * math.sqrt(inputs.d_max) / inputs.gamma * inputs.seed_spread
    return _ceil_floored(math.log(argument) / inputs.mu_prime)


def kgamma_bound_ppr(inputs):
    """Tighter bound for PPR coefficients: gamma is rescaled by 1 / (1 - alpha)."""
    inputs.require_gap()
    if inputs.alpha is None:
        raise ValueError("The PPR bound needs alpha.")
    alpha = inputs.alpha
    argument = 2.0 * math.sqrt(inputs.d_max) * (1.0 - alpha) / inputs.gamma * inputs.seed_spread
    return _ceil_floored(math.log(argument) / (inputs.mu_prime - math.log(alpha)))


def decay_envelope(inputs, steps):
    """sqrt(d_max) (...) e^(-K mu') for each K in ``steps``."""
    steps = np.asarray(steps, dtype=np.float64)
    return math.sqrt(inputs.d_max) * inputs.seed_spread * np.exp(-steps * inputs.mu_prime)


def _difference_walk(graph, seeds_plus, seeds_minus, K):
    start = seed_vector(graph.num_nodes, seeds_plus) - seed_vector(
        graph.num_nodes, seeds_minus
    )
    differences, _ = landing_probabilities(graph, start, K)
    return differences


def step_discrepancy_norms(graph, seeds_plus, seeds_minus, K_max):
    """||H^K v+ - H^K v-|| for K = 1..K_max."""
    return np.linalg.norm(_difference_walk(graph, seeds_plus, seeds_minus, K_max), axis=0)


@dataclass(frozen=True)
class EmpiricalKGamma:
    K: int
    found: bool
    minimum: float
    norms: np.ndarray


def empirical_kgamma(graph, seeds_plus, seeds_minus, gamma, K_max):
    """Smallest K <= K_max whose step-K discrepancy is at most gamma."""
    if K_max < 1:
        raise ValueError("K_max must be at least 1.")
    # walking the signed difference is linear, so columns are p+^(k) - p-^(k)
    differences = _difference_walk(graph, seeds_plus, seeds_minus, K_max + 1)
    norms = np.linalg.norm(differences[:, :-1] - differences[:, 1:], axis=0)
    hits = np.flatnonzero(norms <= gamma)
    if hits.size:
        return EmpiricalKGamma(int(hits[0]) + 1, True, float(norms.min()), norms)
    return EmpiricalKGamma(None, False, float(norms.min()), norms)
