"""
Run configuration: config files, flag merging and validation.
"""
from pathlib import Path

from django.conf import settings
from rest_framework import serializers

from harness.experiments import METHODS, MethodSpec, SamplingSpec

CONFLICT = "conflicting"

# Flags that only make sense for some methods.
METHOD_FLAGS = {
    "k": {"adadif", "radadif", "ppr", "ppr_rank", "hk"},
    "lam": {"adadif"},
    "dictionary": {"adadif"},
    "unconstrained": {"adadif"},
    "ridge": {"adadif"},
    "alpha": {"ppr", "ppr_rank"},
    "t": {"hk"},
    "step": {"kstep"},
    "iters": {"lp"},
    "lambda_o": {"radadif"},
    "lambda_theta": {"radadif"},
    "exact_prox": {"radadif"},
}


class ConfigFileError(ValueError):
    pass


def given(value):
    return value is not None and value is not False


def flag_name(key):
    return "--" + key.replace("_", "-")


def read_config_file(path):
    """Parse ``key=value`` lines; '#' starts a comment, dashes in keys become underscores."""
    values = {}
    with open(path) as stream:
        for line_number, raw_line in enumerate(stream, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            if not separator or not key.strip():
                raise ConfigFileError(f"{Path(path).name} line {line_number}: expected key=value.")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def merge_options(options, config_path=None):
    """Flags given on the command line win over the config file.

    Unset flags are ``None`` (or ``False`` for switches) in ``options``.
    """
    merged = {key: value for key, value in options.items() if given(value)}
    if config_path:
        for key, value in read_config_file(config_path).items():
            merged.setdefault(key, value)
    return merged


def method_spec(name, data):
    """MethodSpec from validated flags, keeping only those the method accepts."""
    data = {
        flag: value
        for flag, value in data.items()
        if flag in METHOD_FLAGS and name in METHOD_FLAGS[flag]
    }
    return MethodSpec(
        name=name,
        K=data.get("k"),
        lam=data.get("lam"),
        alpha=data.get("alpha"),
        t=data.get("t"),
        k=data.get("step"),
        iters=data.get("iters"),
        lambda_o=data.get("lambda_o"),
        lambda_theta=data.get("lambda_theta"),
        ridge=data.get("ridge"),
        dictionary=data.get("dictionary", False),
        unconstrained=data.get("unconstrained", False),
        exact_prox=data.get("exact_prox", False),
    )


class GridField(serializers.Field):
    """Comma-separated numbers."""

    def to_internal_value(self, data):
        items = data if isinstance(data, (list, tuple)) else str(data).split(",")
        try:
            grid = [float(item) for item in items if str(item).strip()]
        except ValueError:
            raise serializers.ValidationError(f"{data!r} is not a comma-separated list of numbers.")
        if not grid:
            raise serializers.ValidationError("The list is empty.")
        return grid

    def to_representation(self, value):
        return list(value)


class DatasetConfigSerializer(serializers.Serializer):
    """Dataset files and execution options shared by every subcommand."""

    edges = serializers.CharField()
    labels = serializers.CharField()
    name = serializers.CharField(required=False)
    largest_component = serializers.BooleanField(default=False)
    jobs = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)

    def validate(self, attrs):
        attrs.setdefault("jobs", settings.ADADIF["JOBS"])
        attrs.setdefault("seed", settings.ADADIF["SEED"])
        return attrs


class RunConfigSerializer(DatasetConfigSerializer):
    """Method, hyperparameters and sampling of an experiment."""

    method = serializers.ChoiceField(choices=METHODS, default="adadif")
    k = serializers.IntegerField(min_value=1, required=False)
    lam = serializers.FloatField(min_value=0, required=False)
    alpha = serializers.FloatField(required=False)
    t = serializers.FloatField(required=False)
    step = serializers.IntegerField(min_value=1, required=False)
    iters = serializers.IntegerField(min_value=1, required=False)
    lambda_o = serializers.FloatField(min_value=0, required=False)
    lambda_theta = serializers.FloatField(min_value=0, required=False)
    ridge = serializers.FloatField(min_value=0, required=False)
    dictionary = serializers.BooleanField(default=False)
    unconstrained = serializers.BooleanField(default=False)
    exact_prox = serializers.BooleanField(default=False)
    per_class = serializers.IntegerField(min_value=1, required=False)
    fraction = serializers.FloatField(required=False)
    p_cor = serializers.FloatField(min_value=0, max_value=1, default=0.0)
    trials = serializers.IntegerField(min_value=1, required=False)

    default_fraction = None

    def validate_alpha(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("alpha must lie in (0, 1).")
        return value

    def validate_t(self, value):
        if value <= 0:
            raise serializers.ValidationError("t must be positive.")
        return value

    def validate_fraction(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("fraction must lie in (0, 1).")
        return value

    def validate_sampling(self, attrs):
        if "per_class" in attrs and "fraction" in attrs:
            raise serializers.ValidationError(
                "--per-class and --fraction are mutually exclusive.", code=CONFLICT
            )
        if "per_class" not in attrs and "fraction" not in attrs:
            if self.default_fraction is None:
                raise serializers.ValidationError("Give --per-class or --fraction.")
            attrs["fraction"] = self.default_fraction

    def validate_method_flags(self, attrs, methods):
        for flag, accepted in METHOD_FLAGS.items():
            if given(attrs.get(flag)) and not accepted & set(methods):
                raise serializers.ValidationError(
                    f"{flag_name(flag)} does not apply to method {', '.join(methods)}.",
                    code=CONFLICT,
                )
        if attrs["dictionary"] and attrs["unconstrained"]:
            raise serializers.ValidationError(
                "--dictionary and --unconstrained are mutually exclusive.", code=CONFLICT
            )
        if "kstep" in methods and "step" not in attrs:
            raise serializers.ValidationError("Method kstep needs --step.")

    def validate(self, attrs):
        attrs = super().validate(attrs)
        self.validate_sampling(attrs)
        self.validate_method_flags(attrs, [attrs["method"]])
        return attrs

    def method_spec(self):
        return method_spec(self.validated_data["method"], self.validated_data)

    def sampling_spec(self):
        data = self.validated_data
        return SamplingSpec(
            per_class=data.get("per_class"), fraction=data.get("fraction"), p_cor=data["p_cor"]
        )


class CorruptConfigSerializer(RunConfigSerializer):
    methods = serializers.CharField(default="adadif,radadif,ppr,hk,ppr_rank")
    p_cor_grid = GridField(default=[0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3])

    default_fraction = 0.05

    def validate_methods(self, value):
        names = [name.strip() for name in value.split(",") if name.strip()]
        unknown = sorted(set(names) - set(METHODS))
        if unknown or not names:
            raise serializers.ValidationError(f"Unknown method(s): {', '.join(unknown) or '-'}.")
        return names

    def validate_p_cor_grid(self, value):
        if any(not 0 <= p_cor <= 1 for p_cor in value):
            raise serializers.ValidationError("p_cor values must lie in [0, 1].")
        return value

    def validate(self, attrs):
        attrs = DatasetConfigSerializer.validate(self, attrs)
        self.validate_sampling(attrs)
        self.validate_method_flags(attrs, attrs["methods"])
        return attrs

    def method_specs(self):
        return [method_spec(name, self.validated_data) for name in self.validated_data["methods"]]


class RocConfigSerializer(RunConfigSerializer):
    lambda_grid = GridField(
        default=[0.0, 1e-3, 2e-3, 5e-3, 1e-2, 14.6e-3, 2e-2, 5e-2, 1e-1, 1e6]
    )

    default_fraction = 0.05

    def validate_lambda_grid(self, value):
        if any(lambda_o < 0 for lambda_o in value):
            raise serializers.ValidationError("lambda_o values must be nonnegative.")
        return value

    def validate(self, attrs):
        attrs["method"] = "radadif"
        if "p_cor" not in self.initial_data:
            attrs["p_cor"] = 0.15
        return super().validate(attrs)


class SweepConfigSerializer(RunConfigSerializer):
    parameter = serializers.ChoiceField(choices=("k", "step", "lam", "alpha", "t", "iters"))
    values = GridField()

    # sweep flag -> MethodSpec field
    FIELDS = {"k": "K", "step": "k"}

    def validate(self, attrs):
        parameter = attrs["parameter"]
        if parameter in ("k", "step", "iters"):
            if any(value < 1 or value != int(value) for value in attrs["values"]):
                raise serializers.ValidationError(
                    f"--values for {parameter} must be positive integers."
                )
            attrs["values"] = [int(value) for value in attrs["values"]]
        if attrs["method"] not in METHOD_FLAGS[parameter]:
            raise serializers.ValidationError(
                f"Method {attrs['method']} has no parameter {parameter}.", code=CONFLICT
            )
        attrs.setdefault(parameter, attrs["values"][0])
        return super().validate(attrs)

    def swept_field(self):
        parameter = self.validated_data["parameter"]
        return self.FIELDS.get(parameter, parameter)


class BoundConfigSerializer(DatasetConfigSerializer):
    gamma = serializers.FloatField()
    alpha = serializers.FloatField(required=False)
    positive = serializers.IntegerField(required=False)
    negative = serializers.IntegerField(required=False)
    fractions = GridField(required=False)
    k_max = serializers.IntegerField(min_value=1, default=500)

    def validate_gamma(self, value):
        if value <= 0:
            raise serializers.ValidationError("gamma must be positive.")
        return value

    def validate_alpha(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("alpha must lie in (0, 1).")
        return value

    def validate_fractions(self, value):
        if any(not 0 < fraction < 1 for fraction in value):
            raise serializers.ValidationError("fractions must lie in (0, 1).")
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        attrs.setdefault("alpha", settings.ADADIF["FIXED"]["PPR_ALPHA"])
        if "positive" in attrs and attrs.get("negative") == attrs["positive"]:
            raise serializers.ValidationError(
                "--positive and --negative name the same class.", code=CONFLICT
            )
        return attrs
