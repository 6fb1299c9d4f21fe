"""Small dense quadratic programs over diffusion coefficients.

The problems solved here are K-dimensional with K in the tens, so
everything is dense numpy.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceError, NumericalError

logger = logging.getLogger(__name__)

SIMPLEX = "simplex"
HYPERPLANE = "hyperplane"
FIXED = "fixed"
CONSTRAINTS = (SIMPLEX, HYPERPLANE, FIXED)

CONSTRAINT_TOL = 1e-8
PSD_TOL = 1e-8
SOLVER_TOL = 1e-9
SOLVER_MAX_ITER = 10000
ZERO_TOL = 1e-12
FINISH_FIRST = 5


class QuadraticSystem:
    """f(theta) = theta^T A theta + theta^T b with A stored symmetric."""

    def __init__(self, A, b):
        A = np.asarray(A, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64).ravel()
        if A.ndim != 2 or A.shape != (b.size, b.size):
            raise ValueError(f"A must be {b.size}x{b.size}, got {A.shape}.")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise NumericalError("Quadratic system has non-finite entries.")
        self.A = 0.5 * (A + A.T)
        self.b = b

    @property
    def size(self):
        return self.b.size

    def objective(self, theta):
        return float(theta @ self.A @ theta + theta @ self.b)

    def gradient(self, theta):
        return 2.0 * self.A @ theta + self.b


@dataclass(frozen=True)
class CoefficientVector:
    theta: np.ndarray
    constraint: str
    residual: float = field(default=None, compare=False)
    iterations: int = field(default=None, compare=False)

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64)
        theta.flags.writeable = False
        object.__setattr__(self, "theta", theta)
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"Unknown constraint {self.constraint!r}.")
        if self.constraint in (SIMPLEX, HYPERPLANE):
            if abs(theta.sum() - 1.0) > CONSTRAINT_TOL:
                raise NumericalError(
                    f"Coefficients sum to {theta.sum():.12g}, expected 1."
                )
        if self.constraint == SIMPLEX and theta.min() < 0:
            raise NumericalError("Simplex coefficients must be nonnegative.")

    def __len__(self):
        return self.theta.size

    @property
    def K(self):
        return self.theta.size


def project_simplex(x):
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    x = np.asarray(x, dtype=np.float64)
    ordered = np.sort(x)[::-1]
    excess = np.cumsum(ordered) - 1.0
    ranks = np.arange(1, x.size + 1)
    active = ordered - excess / ranks > 0
    rho = ranks[active][-1]
    tau = excess[active][-1] / rho
    return np.maximum(x - tau, 0.0)


def kkt_residual(system, theta):
    """||theta - P(theta - grad f(theta))||_inf; zero exactly at the simplex minimizer."""
    return float(np.max(np.abs(theta - project_simplex(theta - system.gradient(theta)))))


def _support_solution(system, support):
    """Minimizer of f on the affine hull of ``support`` (bordered KKT, least squares)."""
    size = support.size
    bordered = np.zeros((size + 1, size + 1))
    bordered[:size, :size] = 2.0 * system.A[np.ix_(support, support)]
    bordered[:size, size] = 1.0
    bordered[size, :size] = 1.0
    rhs = np.append(-system.b[support], 1.0)
    solution = np.linalg.lstsq(bordered, rhs, rcond=None)[0]
    candidate = np.zeros(system.size)
    candidate[support] = solution[:size]
    return candidate


def _active_set_finish(system, theta, tol):
    """Primal active-set iterations warm-started at ``theta``.

    Returns (theta, residual) once the KKT residual is within ``tol``,
    None otherwise; the caller keeps iterating from its own iterate.
    """
    theta = np.where(theta > ZERO_TOL, theta, 0.0)
    theta /= theta.sum()
    support = np.flatnonzero(theta)
    for _ in range(4 * system.size + 10):
        candidate = _support_solution(system, support)
        blocked = support[candidate[support] < 0]
        if blocked.size:
            # step towards the candidate until the first coordinate hits zero
            ratios = theta[blocked] / (theta[blocked] - candidate[blocked])
            first = int(np.argmin(ratios))
            theta = np.maximum(theta + ratios[first] * (candidate - theta), 0.0)
            theta[blocked[first]] = 0.0
            theta /= theta.sum()
            support = np.flatnonzero(theta > ZERO_TOL)
            continue

        theta = candidate / candidate.sum()
        gradient = system.gradient(theta)
        outside = np.setdiff1d(np.arange(system.size), support)
        if outside.size:
            violation = gradient[support].mean() - gradient[outside]
            worst = int(np.argmax(violation))
            if violation[worst] > 0.5 * tol:
                support = np.union1d(support, outside[worst:worst + 1])
                continue
        residual = kkt_residual(system, theta)
        return (theta, residual) if residual <= tol else None
    return None


def solve_simplex_qp(system, tol=SOLVER_TOL, max_iter=SOLVER_MAX_ITER):
    """Minimize theta^T A theta + theta^T b over the probability simplex.

    Accelerated projected gradient with adaptive restart and step 1/L,
    L = 2 lambda_max(A), stopped on the KKT residual
    ||theta - P(theta - grad f(theta))||_inf <= tol. At iterations 5, 10,
    20, 40, ... an active-set finish warm-started at the iterate is
    tried and accepted once it passes the same test.
    """
    eigenvalues = np.linalg.eigvalsh(system.A)
    if eigenvalues[0] < -PSD_TOL:
        shift = abs(eigenvalues[0]) + 1e-10
        logger.debug("Shifting indefinite system by %.3g.", shift)
        system = QuadraticSystem(system.A + shift * np.eye(system.size), system.b)
        eigenvalues = eigenvalues + shift
    lipschitz = 2.0 * eigenvalues[-1]
    if lipschitz <= 0:
        lipschitz = 1.0

    theta = np.full(system.size, 1.0 / system.size)
    residual = kkt_residual(system, theta)
    if residual <= tol:
        return CoefficientVector(theta, SIMPLEX, residual=residual, iterations=0)

    extrapolated = theta.copy()
    momentum = 1.0
    next_finish = FINISH_FIRST
    for iteration in range(1, max_iter + 1):
        step = extrapolated - system.gradient(extrapolated) / lipschitz
        updated = project_simplex(step)
        if np.dot(extrapolated - updated, updated - theta) > 0:
            momentum = 1.0
            extrapolated = updated.copy()
        else:
            next_momentum = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * momentum**2))
            extrapolated = updated + (momentum - 1.0) / next_momentum * (
                updated - theta
            )
            momentum = next_momentum
        theta = updated

        residual = kkt_residual(system, theta)
        if residual <= tol:
            break
        if iteration == next_finish:
            next_finish *= 2
            finished = _active_set_finish(system, theta, tol)
            if finished is not None:
                theta, residual = finished
                break
    else:
        raise ConvergenceError(
            f"Simplex QP did not reach residual {tol:g} in {max_iter} iterations "
            f"(last residual {residual:.3g}).",
            iterate=theta,
            residual=residual,
            iterations=max_iter,
        )

    logger.debug("Simplex QP converged in %d iterations.", iteration)
    return CoefficientVector(theta, SIMPLEX, residual=residual, iterations=iteration)


def default_ridge(system):
    return 1e-8 * max(np.trace(system.A), 0.0) / system.size


def solve_hyperplane_qp(system, ridge=None):
    """Exact minimizer of theta^T A theta + theta^T b subject to 1^T theta = 1.

    Solves the bordered KKT system [[2(A + ridge I), 1], [1^T, 0]].
    """
    if ridge is None:
        ridge = default_ridge(system)
    if ridge < 0:
        raise ValueError("ridge must be nonnegative.")
    size = system.size
    bordered = np.zeros((size + 1, size + 1))
    bordered[:size, :size] = 2.0 * (system.A + ridge * np.eye(size))
    bordered[:size, size] = 1.0
    bordered[size, :size] = 1.0
    rhs = np.append(-system.b, 1.0)

    advice = f"KKT system is singular with ridge {ridge:g}; use a larger ridge."
    if np.linalg.cond(bordered) > 1.0 / np.finfo(float).eps:
        raise NumericalError(advice)
    try:
        solution = np.linalg.solve(bordered, rhs)
    except np.linalg.LinAlgError as error:
        raise NumericalError(advice) from error
    if not np.all(np.isfinite(solution)):
        raise NumericalError(advice)
    return CoefficientVector(solution[:size], HYPERPLANE)


def row_group_soft_threshold(X, lambda_o, row_weights=None):
    """Proximal map of the (2,1)-norm: x_i * [1 - lambda_o w_i / (2 ||x_i||)]_+."""
    if lambda_o < 0:
        raise ValueError("lambda_o must be nonnegative.")
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    thresholds = 0.5 * lambda_o * (
        1.0 if row_weights is None else np.asarray(row_weights, dtype=np.float64)
    )
    thresholds = np.broadcast_to(thresholds, norms.shape)
    scale = np.zeros_like(norms)
    kept = norms > thresholds
    scale[kept] = 1.0 - thresholds[kept] / norms[kept]
    return X * scale[:, None]
