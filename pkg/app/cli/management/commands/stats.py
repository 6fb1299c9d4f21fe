from cli.base import ToolkitCommand
from cli.config import DatasetConfigSerializer
from cli.serializers import StatsSerializer
from harness.datasets import KNOWN_DATASETS


class Command(ToolkitCommand):
    help = (
        "Print node, edge and class counts of a dataset and check them against the "
        "published sizes of known datasets. A JSON report is written only with --output."
    )
    config_serializer = DatasetConfigSerializer

    def run_command(self, config, options):
        dataset = self.load_dataset(config, validate=False)
        stats = dataset.stats
        known = dataset.name in KNOWN_DATASETS
        checked = known and not dataset.metadata["largest_component"]
        ok = stats == KNOWN_DATASETS[dataset.name] if checked else None
        verdict = {True: "OK", False: "MISMATCH", None: "UNCHECKED"}[ok]
        self.stdout.write(
            f"{dataset.name}: N={stats.nodes}, |E|={stats.edges}, |Y|={stats.classes}, {verdict}"
        )
        if options["output"] != "-":
            report = {
                "dataset": dataset.name,
                "nodes": stats.nodes,
                "edges": stats.edges,
                "classes": stats.classes,
                "multilabel": dataset.multilabel,
                "labeled_nodes": dataset.metadata["labeled_nodes"],
                "components": dataset.graph.num_components,
                "known": known,
                "ok": ok,
            }
            self.write_document(options, dataset.name, StatsSerializer(report).data)
        if ok is False:
            dataset.validate()
