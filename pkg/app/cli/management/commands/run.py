import logging

from cli.base import ToolkitCommand, add_method_arguments, add_sampling_arguments
from cli.config import RunConfigSerializer
from cli.serializers import ExperimentSerializer
from harness.experiments import run_experiment
from harness.models import ExperimentRun

logger = logging.getLogger(__name__)


class Command(ToolkitCommand):
    help = "Run one method over repeated trials and write per-trial and aggregate F1 scores."
    config_serializer = RunConfigSerializer

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_method_arguments(parser)
        add_sampling_arguments(parser)
        parser.add_argument(
            "--store", action="store_true", help="Also save the run in the database."
        )

    def run_command(self, config, options):
        data = config.validated_data
        dataset = self.load_dataset(config)
        result = run_experiment(
            dataset,
            config.method_spec(),
            config.sampling_spec(),
            trials=data.get("trials"),
            seed=data["seed"],
            jobs=data["jobs"],
        )
        self.write_document(
            options, f"{dataset.name} {result.method.name}", ExperimentSerializer(result).data
        )
        if options["store"]:
            run = ExperimentRun.objects.create_run(result)
            logger.info("Stored run %s.", run.slug)
