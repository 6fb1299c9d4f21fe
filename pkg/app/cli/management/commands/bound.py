import logging

import numpy as np
from django.conf import settings

from cli.base import ToolkitCommand
from cli.config import BoundConfigSerializer
from cli.serializers import BoundSerializer
from core.exceptions import LabelError
from theory.bounds import BoundInputs, empirical_kgamma, kgamma_bound, kgamma_bound_ppr

logger = logging.getLogger(__name__)


def subsample(seeds, fraction, rng):
    """At least one seed, ``fraction`` of them otherwise, drawn without replacement."""
    size = max(1, int(fraction * seeds.size))
    return np.sort(rng.choice(seeds, size=size, replace=False))


class Command(ToolkitCommand):
    help = "Closed-form and empirical walk lengths K_gamma for separating two classes."
    config_serializer = BoundConfigSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--gamma", type=float, help="Separation margin.")
        parser.add_argument("--alpha", type=float, help="PPR teleport parameter of the PPR bound.")
        parser.add_argument("--positive", type=int, help="Positive class; the first class by default.")
        parser.add_argument("--negative", type=int, help="Negative class; the second class by default.")
        parser.add_argument(
            "--fractions", help="Comma-separated seed fractions for the empirical K_gamma."
        )
        parser.add_argument("--k-max", type=int, help="Longest walk the empirical search tries.")

    def pick_classes(self, labels, data):
        classes = labels.classes_in_use
        positive = data.get("positive", classes[0] if classes else None)
        negative = data.get("negative")
        if negative is None:
            negative = next((label for label in classes if label != positive), None)
        for label in (positive, negative):
            if label is None or label not in classes:
                raise LabelError(
                    "Class %(label)s has no labeled nodes.", params={"label": label}
                )
        return positive, negative

    def run_command(self, config, options):
        data = config.validated_data
        dataset = self.load_dataset(config)
        graph = dataset.graph
        positive, negative = self.pick_classes(dataset.labels, data)
        plus = dataset.labels.class_seeds(positive)
        minus = dataset.labels.class_seeds(negative)

        spectral = settings.ADADIF["SPECTRAL"]
        summary = graph.spectral_summary(tol=spectral["TOL"], max_iter=spectral["MAX_ITER"])
        inputs = BoundInputs.from_graph(
            graph, plus, minus, data["gamma"], summary=summary, alpha=data["alpha"]
        )
        bound = kgamma_bound(inputs)
        bound_ppr = kgamma_bound_ppr(inputs)

        rng = np.random.default_rng(data["seed"])
        draws = [(None, plus, minus)] + [
            (fraction, subsample(plus, fraction, rng), subsample(minus, fraction, rng))
            for fraction in data.get("fractions", [])
        ]
        empirical = []
        for fraction, seeds_plus, seeds_minus in draws:
            found = empirical_kgamma(graph, seeds_plus, seeds_minus, data["gamma"], data["k_max"])
            empirical.append(
                {
                    "fraction": fraction,
                    "n_plus": seeds_plus.size,
                    "n_minus": seeds_minus.size,
                    "K": found.K,
                    "found": found.found,
                    "minimum": found.minimum,
                }
            )
        logger.info(
            "%s: mu'=%.4g, K_gamma bound %d (PPR %d), empirical %s.",
            dataset.name,
            summary.mu_prime,
            bound,
            bound_ppr,
            empirical[0]["K"],
        )
        results = {
            "dataset": dataset.name,
            "positive": positive,
            "negative": negative,
            "gamma": data["gamma"],
            "alpha": data["alpha"],
            "mu2": summary.mu2,
            "muN": summary.muN,
            "mu_prime": summary.mu_prime,
            "kgamma_bound": bound,
            "kgamma_bound_ppr": bound_ppr,
            "empirical": empirical,
        }
        self.write_document(options, dataset.name, BoundSerializer(results).data)
