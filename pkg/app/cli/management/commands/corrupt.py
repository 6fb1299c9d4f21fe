from cli.base import ToolkitCommand, add_method_arguments, add_sampling_arguments
from cli.config import CorruptConfigSerializer
from cli.serializers import SweepSerializer
from harness.experiments import corruption_sweep


class Command(ToolkitCommand):
    help = "Mean F1 of several methods over a grid of label corruption probabilities."
    config_serializer = CorruptConfigSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--methods", help="Comma-separated methods to compare.")
        parser.add_argument("--p-cor-grid", help="Comma-separated corruption probabilities.")
        add_method_arguments(parser, method=False)
        add_sampling_arguments(parser)

    def run_command(self, config, options):
        data = config.validated_data
        dataset = self.load_dataset(config)
        experiments = corruption_sweep(
            dataset,
            config.method_specs(),
            config.sampling_spec(),
            data["p_cor_grid"],
            trials=data.get("trials"),
            seed=data["seed"],
            jobs=data["jobs"],
        )
        self.write_document(
            options,
            dataset.name,
            {
                "dataset": dataset.name,
                "p_cor_grid": data["p_cor_grid"],
                "experiments": SweepSerializer(experiments, many=True).data,
            },
        )
