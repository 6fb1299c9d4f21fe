"""
JSON result documents.

Every document carries ``schema_version`` and ``command`` at the top level
and one command-specific payload under ``results``.
"""
from django.conf import settings
from rest_framework import serializers
from rest_framework.renderers import JSONRenderer


class TrialSerializer(serializers.Serializer):
    index = serializers.IntegerField()
    seed = serializers.IntegerField()
    micro_f1 = serializers.FloatField()
    macro_f1 = serializers.FloatField()
    wall_time = serializers.FloatField()
    num_labeled = serializers.IntegerField()
    num_evaluated = serializers.IntegerField()
    unreachable = serializers.IntegerField()


class ExperimentSerializer(serializers.Serializer):
    dataset = serializers.CharField()
    method = serializers.CharField(source="method.name")
    params = serializers.DictField(source="method.params")
    sampling = serializers.DictField(source="sampling.as_dict")
    seed = serializers.IntegerField()
    metadata = serializers.DictField()
    aggregate = serializers.SerializerMethodField()
    trials = TrialSerializer(many=True)

    def get_aggregate(self, result):
        return {
            "micro_f1_mean": result.micro_mean,
            "micro_f1_std": result.micro_std,
            "macro_f1_mean": result.macro_mean,
            "macro_f1_std": result.macro_std,
            "wall_time_mean": result.wall_time_mean,
            "trials": len(result.trials),
        }


class SweepSerializer(serializers.Serializer):
    """One experiment of a parameter or corruption sweep, without per-trial rows."""

    method = serializers.CharField(source="method.name")
    params = serializers.DictField(source="method.params")
    sampling = serializers.DictField(source="sampling.as_dict")
    micro_f1_mean = serializers.FloatField(source="micro_mean")
    micro_f1_std = serializers.FloatField(source="micro_std")
    macro_f1_mean = serializers.FloatField(source="macro_mean")
    macro_f1_std = serializers.FloatField(source="macro_std")
    trials = serializers.SerializerMethodField()

    def get_trials(self, result):
        return len(result.trials)


class RocPointSerializer(serializers.Serializer):
    lambda_o = serializers.FloatField()
    p_fa = serializers.FloatField()
    p_d = serializers.FloatField()


class EmpiricalSerializer(serializers.Serializer):
    fraction = serializers.FloatField(allow_null=True)
    n_plus = serializers.IntegerField()
    n_minus = serializers.IntegerField()
    K = serializers.IntegerField(allow_null=True)
    found = serializers.BooleanField()
    minimum = serializers.FloatField()


class BoundSerializer(serializers.Serializer):
    dataset = serializers.CharField()
    positive = serializers.IntegerField()
    negative = serializers.IntegerField()
    gamma = serializers.FloatField()
    alpha = serializers.FloatField()
    mu2 = serializers.FloatField()
    muN = serializers.FloatField()
    mu_prime = serializers.FloatField()
    kgamma_bound = serializers.IntegerField()
    kgamma_bound_ppr = serializers.IntegerField()
    empirical = EmpiricalSerializer(many=True)


class StatsSerializer(serializers.Serializer):
    dataset = serializers.CharField()
    nodes = serializers.IntegerField()
    edges = serializers.IntegerField()
    classes = serializers.IntegerField()
    multilabel = serializers.BooleanField()
    labeled_nodes = serializers.IntegerField()
    components = serializers.IntegerField()
    known = serializers.BooleanField()
    ok = serializers.BooleanField(allow_null=True)


def render_document(command, results):
    document = {
        "schema_version": settings.ADADIF["SCHEMA_VERSION"],
        "command": command,
        "results": results,
    }
    return JSONRenderer().render(document)
