from cli.base import ToolkitCommand, add_method_arguments, add_sampling_arguments
from cli.config import SweepConfigSerializer
from cli.serializers import SweepSerializer
from harness.experiments import parameter_sweep


class Command(ToolkitCommand):
    help = "One experiment per value of a single hyperparameter."
    config_serializer = SweepConfigSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--parameter", help="k, step, lam, alpha, t or iters.")
        parser.add_argument("--values", help="Comma-separated values of the parameter.")
        add_method_arguments(parser)
        add_sampling_arguments(parser)

    def run_command(self, config, options):
        data = config.validated_data
        dataset = self.load_dataset(config)
        experiments = parameter_sweep(
            dataset,
            config.method_spec(),
            config.sampling_spec(),
            config.swept_field(),
            data["values"],
            trials=data.get("trials"),
            seed=data["seed"],
            jobs=data["jobs"],
        )
        rows = SweepSerializer(experiments, many=True).data
        for value, row in zip(data["values"], rows):
            row["value"] = value
        self.write_document(
            options,
            f"{dataset.name} {data['method']} {data['parameter']}",
            {"dataset": dataset.name, "parameter": data["parameter"], "experiments": rows},
        )
