from cli.base import ToolkitCommand, add_sampling_arguments
from cli.config import RocConfigSerializer
from cli.serializers import RocPointSerializer
from harness.experiments import roc_sweep


class Command(ToolkitCommand):
    help = "Detection and false-alarm rates of r-AdaDIF outliers over a lambda_o grid."
    config_serializer = RocConfigSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--lambda-grid", help="Comma-separated lambda_o values.")
        parser.add_argument("--k", type=int, help="Walk length K.")
        parser.add_argument("--lambda-theta", type=float, help="Coefficient penalty.")
        parser.add_argument(
            "--exact-prox", action="store_true", help="Degree-weighted outlier update."
        )
        add_sampling_arguments(parser)

    def run_command(self, config, options):
        data = config.validated_data
        dataset = self.load_dataset(config)
        sampling = config.sampling_spec()
        points = roc_sweep(
            dataset,
            sampling,
            data["lambda_grid"],
            trials=data.get("trials"),
            seed=data["seed"],
            K=data.get("k"),
            lambda_theta=data.get("lambda_theta"),
            exact_prox=data["exact_prox"],
            jobs=data["jobs"],
        )
        self.write_document(
            options,
            dataset.name,
            {
                "dataset": dataset.name,
                "sampling": sampling.as_dict(),
                "points": RocPointSerializer(points, many=True).data,
            },
        )
