"""
Fixed coefficient profiles and classifier hyperparameters.
"""
from dataclasses import dataclass, replace

import numpy as np
from django.conf import settings
from scipy.special import gammaln

from core.optim import FIXED, SOLVER_MAX_ITER, SOLVER_TOL, CoefficientVector

DICTIONARY_HK_TIMES = (5.0, 8.0, 12.0, 15.0, 20.0)
DICTIONARY_POLY_POWERS = (2.0, 4.0, 6.0, 8.0, 10.0)


def _normalized(log_weights):
    weights = np.exp(log_weights - log_weights.max())
    return weights / weights.sum()


def ppr_coefficients(alpha, K):
    """theta_k proportional to alpha^k, k = 1..K."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1).")
    steps = np.arange(1, K + 1)
    return CoefficientVector(_normalized(steps * np.log(alpha)), FIXED)


def hk_coefficients(t, K):
    """theta_k proportional to t^k / k!, k = 1..K."""
    if t <= 0:
        raise ValueError("t must be positive.")
    steps = np.arange(1, K + 1)
    return CoefficientVector(_normalized(steps * np.log(t) - gammaln(steps + 1)), FIXED)


def polynomial_coefficients(beta, K):
    """theta_k proportional to k^beta."""
    steps = np.arange(1, K + 1)
    return CoefficientVector(_normalized(beta * np.log(steps)), FIXED)


def default_dictionary(K, hk_times=DICTIONARY_HK_TIMES, poly_powers=DICTIONARY_POLY_POWERS):
    """K x D dictionary of heat kernel and polynomial columns."""
    columns = [hk_coefficients(t, K).theta for t in hk_times]
    columns += [polynomial_coefficients(beta, K).theta for beta in poly_powers]
    return np.column_stack(columns)


@dataclass(frozen=True)
class HyperParams:
    K: int = 15
    lam: float = 15.0
    dictionary: bool = False
    unconstrained: bool = False
    ridge: float = None
    tol: float = SOLVER_TOL
    max_iter: int = SOLVER_MAX_ITER

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be at least 1.")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative.")
        if self.ridge is not None and self.ridge < 0:
            raise ValueError("ridge must be nonnegative.")

    @classmethod
    def from_settings(cls, multilabel=False, **overrides):
        """Defaults from ``settings.ADADIF``; ``None`` overrides are ignored."""
        config = settings.ADADIF
        block = config["MULTILABEL" if multilabel else "MULTICLASS"]
        params = cls(
            K=block["K"],
            lam=block["LAMBDA"],
            tol=config["SOLVER"]["TOL"],
            max_iter=config["SOLVER"]["MAX_ITER"],
        )
        return replace(
            params, **{key: value for key, value in overrides.items() if value is not None}
        )

    def dictionary_matrix(self):
        config = settings.ADADIF["DICTIONARY"]
        return default_dictionary(self.K, config["HK_TIMES"], config["POLY_POWERS"])
