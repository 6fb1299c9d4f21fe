"""
Monte Carlo experiments over sampled labeled sets.

A trial draws a labeled set from the ground truth, optionally corrupts it,
runs one classifier and scores it on the remaining labeled nodes. Trial
seeds are spawned from a master seed, so results do not depend on how many
workers run them.
"""
import logging
import time
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed

from core.exceptions import LabelError
from diffusion.classifiers import (
    fit_adadif,
    fit_fixed,
    kstep_classifier,
    label_propagation,
    predict,
    predict_by_rank,
    predict_top,
)
from diffusion.coefficients import HyperParams, hk_coefficients, ppr_coefficients
from robust.fit import RobustProblem, detection_counts, fit_radadif

from .metrics import micro_macro_f1
from .sampling import class_balanced_sample, corrupt_labels, uniform_sample

logger = logging.getLogger(__name__)

METHODS = ("adadif", "radadif", "ppr", "hk", "lp", "kstep", "ppr_rank")
SWEEP_PARAMETERS = ("K", "lam", "alpha", "t", "k", "iters", "lambda_o", "lambda_theta")
CORRUPTION_STREAM = 1000


@dataclass(frozen=True)
class MethodSpec:
    """A classifier and its hyperparameters; ``None`` means the configured default."""

    name: str
    K: int = None
    lam: float = None
    alpha: float = None
    t: float = None
    k: int = None
    iters: int = None
    lambda_o: float = None
    lambda_theta: float = None
    ridge: float = None
    dictionary: bool = False
    unconstrained: bool = False
    exact_prox: bool = False

    def __post_init__(self):
        if self.name not in METHODS:
            raise ValueError(f"Unknown method {self.name!r}.")

    def resolve(self, multilabel=False):
        """Fill unset hyperparameters from ``settings.ADADIF``."""
        config = settings.ADADIF
        fixed = config["FIXED"]
        if self.name == "adadif":
            block = config["MULTILABEL" if multilabel else "MULTICLASS"]
            defaults = {"K": block["K"], "lam": block["LAMBDA"]}
        elif self.name == "radadif":
            robust = config["ROBUST"]
            defaults = {
                "K": robust["K"],
                "lambda_o": robust["LAMBDA_O"],
                "lambda_theta": robust["LAMBDA_THETA"],
            }
        elif self.name in ("ppr", "ppr_rank"):
            defaults = {"K": fixed["K"], "alpha": fixed["PPR_ALPHA"]}
        elif self.name == "hk":
            defaults = {"K": fixed["K"], "t": fixed["HK_T"]}
        elif self.name == "lp":
            defaults = {"iters": fixed["LP_ITERS"]}
        else:
            if self.k is None:
                raise ValueError("The k-step classifier needs k.")
            defaults = {}
        return replace(
            self, **{key: value for key, value in defaults.items() if getattr(self, key) is None}
        )

    def params(self):
        """Hyperparameters that were set, for result records."""
        return {
            spec_field.name: getattr(self, spec_field.name)
            for spec_field in fields(self)
            if spec_field.name != "name"
            and getattr(self, spec_field.name) is not None
            and getattr(self, spec_field.name) is not False
        }

    def diffusions(self, graph, sample):
        if self.name == "adadif":
            hp = HyperParams(
                K=self.K,
                lam=self.lam,
                dictionary=self.dictionary,
                unconstrained=self.unconstrained,
                ridge=self.ridge,
                tol=settings.ADADIF["SOLVER"]["TOL"],
                max_iter=settings.ADADIF["SOLVER"]["MAX_ITER"],
            )
            return fit_adadif(graph, sample, hp)
        if self.name == "radadif":
            robust = settings.ADADIF["ROBUST"]
            fit = fit_radadif(
                graph,
                sample,
                K=self.K,
                lambda_theta=self.lambda_theta,
                lambda_o=self.lambda_o,
                eps=robust["EPS"],
                max_sweeps=robust["MAX_SWEEPS"],
                exact_prox=self.exact_prox,
            )
            return fit.diffusions
        if self.name in ("ppr", "ppr_rank"):
            return fit_fixed(graph, sample, ppr_coefficients(self.alpha, self.K))
        if self.name == "hk":
            return fit_fixed(graph, sample, hk_coefficients(self.t, self.K))
        if self.name == "lp":
            return label_propagation(graph, sample, self.iters)
        return kstep_classifier(graph, sample, self.k)


@dataclass(frozen=True)
class SamplingSpec:
    """Exactly one of ``per_class`` and ``fraction``; ``p_cor`` corrupts the draw."""

    per_class: int = None
    fraction: float = None
    p_cor: float = 0.0

    def __post_init__(self):
        if (self.per_class is None) == (self.fraction is None):
            raise ValueError("Give exactly one of per_class and fraction.")
        if not 0 <= self.p_cor <= 1:
            raise ValueError("p_cor must lie in [0, 1].")

    def as_dict(self):
        return {key: value for key, value in asdict(self).items() if value is not None}

    def draw(self, truth, seed):
        """(labeled set, corrupted nodes) for one trial."""
        if self.per_class is not None:
            sample = class_balanced_sample(truth, self.per_class, seed)
        else:
            sample = uniform_sample(truth, self.fraction, seed)
        if self.p_cor:
            return corrupt_labels(sample, self.p_cor, [seed, CORRUPTION_STREAM])
        return sample, set()


@dataclass
class TrialResult:
    index: int
    seed: int
    method: str
    micro_f1: float
    macro_f1: float
    wall_time: float
    num_labeled: int
    num_evaluated: int
    unreachable: int = 0


@dataclass
class ExperimentResult:
    dataset: str
    method: MethodSpec
    sampling: SamplingSpec
    seed: int
    trials: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def _column(self, name):
        return np.array([getattr(trial, name) for trial in self.trials])

    @staticmethod
    def _std(values):
        return float(values.std(ddof=1)) if values.size > 1 else 0.0

    @property
    def micro_mean(self):
        return float(self._column("micro_f1").mean())

    @property
    def micro_std(self):
        return self._std(self._column("micro_f1"))

    @property
    def macro_mean(self):
        return float(self._column("macro_f1").mean())

    @property
    def macro_std(self):
        return self._std(self._column("macro_f1"))

    @property
    def wall_time_mean(self):
        return float(self._column("wall_time").mean())


def trial_seeds(seed, trials):
    """Deterministic 32-bit seeds for ``trials`` independent trials."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(child.generate_state(1)[0]) for child in children]


def unreachable_count(diffusions, nodes):
    """Nodes of ``nodes`` that score 0 for every class."""
    scores = np.column_stack([diffusion.scores[nodes] for diffusion in diffusions])
    return int(np.sum(np.all(scores == 0, axis=1)))


def _predictions(method, graph, truth, sample, nodes):
    diffusions = method.diffusions(graph, sample)
    unreachable = unreachable_count(diffusions, nodes)
    if truth.multilabel:
        counts = [len(truth.labels_of(node)) for node in nodes.tolist()]
        return predict_top(diffusions, nodes, counts), unreachable
    if method.name == "ppr_rank":
        return predict_by_rank(diffusions, graph, nodes), unreachable
    return predict(diffusions, nodes), unreachable


def run_trial(dataset, method, sampling, seed, index=0):
    truth = dataset.labels
    sample, _ = sampling.draw(truth, seed)
    nodes = np.setdiff1d(truth.nodes, sample.nodes)
    assert not np.intersect1d(nodes, sample.nodes).size, "evaluation touches labeled nodes"
    if not nodes.size:
        raise LabelError("No unlabeled ground-truth nodes are left to evaluate.")

    start = time.perf_counter()
    predictions, unreachable = _predictions(method, dataset.graph, truth, sample, nodes)
    wall_time = time.perf_counter() - start

    if truth.multilabel:
        expected = [truth.labels_of(node) for node in nodes.tolist()]
    else:
        expected = [truth.label_of(node) for node in nodes.tolist()]
    micro, macro = micro_macro_f1(list(predictions), expected, truth.classes, truth.multilabel)
    if unreachable:
        logger.warning(
            "Trial %d: %d evaluation node(s) are unreachable from every seed.",
            index,
            unreachable,
        )
    logger.info(
        "Trial %d %s: micro %.4f macro %.4f (%.2fs).", index, method.name, micro, macro, wall_time
    )
    return TrialResult(
        index=index,
        seed=seed,
        method=method.name,
        micro_f1=micro,
        macro_f1=macro,
        wall_time=wall_time,
        num_labeled=len(sample),
        num_evaluated=nodes.size,
        unreachable=unreachable,
    )


def run_experiment(dataset, method, sampling, trials=None, seed=None, jobs=None):
    config = settings.ADADIF
    if trials is None:
        trials = config["MULTILABEL" if dataset.multilabel else "MULTICLASS"]["TRIALS"]
    seed = config["SEED"] if seed is None else seed
    jobs = jobs or config["JOBS"]
    if trials < 1:
        raise ValueError("trials must be at least 1.")

    method = method.resolve(dataset.multilabel)
    seeds = trial_seeds(seed, trials)
    results = Parallel(n_jobs=jobs)(
        delayed(run_trial)(dataset, method, sampling, trial_seed, index)
        for index, trial_seed in enumerate(seeds)
    )
    experiment = ExperimentResult(
        dataset=dataset.name,
        method=method,
        sampling=sampling,
        seed=seed,
        trials=sorted(results, key=lambda trial: trial.index),
        metadata=dict(dataset.metadata),
    )
    logger.info(
        "%s on %s: micro %.4f ± %.4f, macro %.4f ± %.4f over %d trial(s).",
        method.name,
        dataset.name,
        experiment.micro_mean,
        experiment.micro_std,
        experiment.macro_mean,
        experiment.macro_std,
        trials,
    )
    return experiment


@dataclass(frozen=True)
class RocPoint:
    lambda_o: float
    p_fa: float
    p_d: float


def _roc_trial(dataset, sampling, lambda_grid, seed, K, lambda_theta, exact_prox):
    sample, corrupted = sampling.draw(dataset.labels, seed)
    problem = RobustProblem(dataset.graph, sample, K)
    robust = settings.ADADIF["ROBUST"]
    rates = []
    for lambda_o in lambda_grid:
        fit = fit_radadif(
            dataset.graph,
            sample,
            K=K,
            lambda_theta=lambda_theta,
            lambda_o=lambda_o,
            eps=robust["EPS"],
            max_sweeps=robust["MAX_SWEEPS"],
            exact_prox=exact_prox,
            problem=problem,
        )
        rates.append(detection_counts(fit, corrupted))
    return rates


def roc_sweep(
    dataset,
    sampling,
    lambda_grid,
    trials=None,
    seed=None,
    K=None,
    lambda_theta=None,
    exact_prox=False,
    jobs=None,
):
    """Mean (p_fa, p_d) of the robust detector per lambda_o, sorted by p_fa.

    ``sampling.p_cor`` sets the corruption level. One leave-one-out problem
    is built per trial and reused across the grid.
    """
    if dataset.multilabel:
        raise LabelError("Outlier detection needs a multiclass dataset.")
    config = settings.ADADIF
    trials = trials or config["MULTICLASS"]["TRIALS"]
    seed = config["SEED"] if seed is None else seed
    K = K or config["ROBUST"]["K"]
    lambda_theta = config["ROBUST"]["LAMBDA_THETA"] if lambda_theta is None else lambda_theta
    lambda_grid = [float(value) for value in lambda_grid]

    per_trial = Parallel(n_jobs=jobs or config["JOBS"])(
        delayed(_roc_trial)(dataset, sampling, lambda_grid, trial_seed, K, lambda_theta, exact_prox)
        for trial_seed in trial_seeds(seed, trials)
    )
    means = np.mean(np.array(per_trial), axis=0)
    points = [
        RocPoint(lambda_o, float(p_fa), float(p_d))
        for lambda_o, (p_d, p_fa) in zip(lambda_grid, means)
    ]
    return sorted(points, key=lambda point: (point.p_fa, point.p_d))


def corruption_sweep(dataset, methods, sampling, p_cor_grid, trials=None, seed=None, jobs=None):
    """One experiment per (p_cor, method); every method sees the same draws."""
    experiments = []
    for p_cor in p_cor_grid:
        corrupted = replace(sampling, p_cor=float(p_cor))
        for method in methods:
            experiments.append(
                run_experiment(dataset, method, corrupted, trials, seed, jobs)
            )
    return experiments


def parameter_sweep(
    dataset, method, sampling, parameter, values, trials=None, seed=None, jobs=None
):
    """One experiment per value of ``parameter`` with everything else fixed."""
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"Cannot sweep {parameter!r}.")
    return [
        run_experiment(dataset, replace(method, **{parameter: value}), sampling, trials, seed, jobs)
        for value in values
    ]
