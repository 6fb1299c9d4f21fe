"""
Shared behaviour of the toolkit's management commands.

Every failure leaves the command as a ``CommandError`` with a one-line,
prefixed message and an exit code: 2 for usage problems, 3 for data
problems, 4 for numerical failures.
"""
import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, handle_default_options
from django.db import connections
from rest_framework import serializers
from slugify import slugify

from core.exceptions import DataError, NumericalError
from harness.datasets import load_dataset

from .config import CONFLICT, ConfigFileError, flag_name, merge_options
from .serializers import render_document

logger = logging.getLogger(__name__)

USAGE = 2
DATA = 3
NUMERICAL = 4


def usage_error(message):
    if message.startswith("unrecognized arguments"):
        raise CommandError(f"unknown-flag: {message}", returncode=USAGE)
    if "invalid" in message and "value" in message:
        raise CommandError(f"invalid-flag: {message}", returncode=USAGE)
    raise CommandError(f"usage-error: {message}", returncode=USAGE)


def _first_error(errors):
    """(flag, message, code) of the first serializer error."""
    for field_name, details in errors.items():
        detail = details[0] if isinstance(details, list) else details
        flag = None if field_name == "non_field_errors" else flag_name(field_name)
        return flag, str(detail), getattr(detail, "code", None)
    return None, "invalid configuration", None


class ToolkitCommand(BaseCommand):
    """Base command: config-file merging, validation and error mapping.

    Subclasses set ``config_serializer`` and implement ``run_command``.
    """

    config_serializer = None
    requires_system_checks = []
    # Extra base options Django adds to every parser; not run configuration.
    BASE_OPTIONS = {
        "verbosity",
        "settings",
        "pythonpath",
        "traceback",
        "no_color",
        "force_color",
        "skip_checks",
        "stdout",
        "stderr",
        "config",
        "output",
        "store",
    }

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, allow_abbrev=False, **kwargs)
        parser.error = usage_error
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--edges", help="Edge list file ('u v [w]' per line).")
        parser.add_argument("--labels", help="Label file ('node label' per line).")
        parser.add_argument("--name", help="Dataset name; defaults to the edge file stem.")
        parser.add_argument(
            "--largest-component",
            action="store_true",
            help="Restrict the graph to its largest connected component.",
        )
        parser.add_argument("--seed", type=int, help="Master seed.")
        parser.add_argument("--jobs", type=int, help="Worker processes.")
        parser.add_argument("--config", help="key=value file with defaults for any flag.")
        parser.add_argument(
            "--output",
            default="-",
            help="Result file, or a directory for an automatically named file; '-' is stdout.",
        )

    def run_from_argv(self, argv):
        self._called_from_command_line = True
        try:
            parser = self.create_parser(argv[0], argv[1])
            options = parser.parse_args(argv[2:])
            cmd_options = vars(options)
            args = cmd_options.pop("args", ())
            handle_default_options(options)
            self.execute(*args, **cmd_options)
        except CommandError as error:
            self.stderr.write(str(error))
            sys.exit(error.returncode)
        finally:
            connections.close_all()

    def handle(self, *args, **options):
        try:
            config = self.load_config(options)
            return self.run_command(config, options)
        except CommandError:
            raise
        except FileNotFoundError as error:
            raise CommandError(f"missing-file: {error.filename}", returncode=DATA)
        except DataError as error:
            raise CommandError(f"data-error: {error}", returncode=DATA)
        except NumericalError as error:
            raise CommandError(f"numerical-error: {error}", returncode=NUMERICAL)
        except ValueError as error:
            raise CommandError(f"invalid-flag: {error}", returncode=USAGE)

    def load_config(self, options):
        """Merge flags with ``--config`` and validate them."""
        flags = {key: value for key, value in options.items() if key not in self.BASE_OPTIONS}
        config_path = options.get("config")
        if config_path and not Path(config_path).is_file():
            raise CommandError(f"missing-file: {config_path}", returncode=DATA)
        try:
            merged = merge_options(flags, config_path)
        except ConfigFileError as error:
            raise CommandError(f"usage-error: {error}", returncode=USAGE)

        serializer = self.config_serializer(data=merged)
        unknown = sorted(set(merged) - set(serializer.fields))
        if unknown:
            raise CommandError(
                f"unknown-flag: {', '.join(flag_name(key) for key in unknown)}", returncode=USAGE
            )
        try:
            serializer.is_valid(raise_exception=True)
        except serializers.ValidationError:
            flag, message, code = _first_error(serializer.errors)
            prefix = "conflicting-flags" if code == CONFLICT else "invalid-flag"
            where = f"{flag}: " if flag else ""
            raise CommandError(f"{prefix}: {where}{message}", returncode=USAGE)
        for path in (serializer.validated_data["edges"], serializer.validated_data["labels"]):
            if not Path(path).is_file():
                raise CommandError(f"missing-file: {path}", returncode=DATA)
        return serializer

    def load_dataset(self, config, validate=True):
        data = config.validated_data
        return load_dataset(
            data["edges"],
            data["labels"],
            name=data.get("name"),
            largest_component=data["largest_component"],
            validate=validate,
        )

    def write_document(self, options, name, results):
        """Render the result document to ``--output``; returns the path written or None."""
        content = render_document(self.command_name, results)
        target = options["output"]
        if target == "-":
            self.stdout.write(content.decode())
            return None
        path = Path(target)
        if target.endswith("/") or path.is_dir():
            path.mkdir(parents=True, exist_ok=True)
            path = path / f"{slugify(f'{name} {self.command_name}')}.json"
        path.write_bytes(content)
        logger.info("Wrote %s results to %s.", self.command_name, path)
        return path

    @property
    def command_name(self):
        return self.__module__.rsplit(".", 1)[-1]

    def run_command(self, config, options):
        raise NotImplementedError


def add_method_arguments(parser, method=True):
    if method:
        parser.add_argument("--method", help="adadif, radadif, ppr, hk, lp, kstep or ppr_rank.")
    parser.add_argument("--k", type=int, help="Walk length K.")
    parser.add_argument("--lambda", dest="lam", type=float, help="AdaDIF smoothness weight.")
    parser.add_argument("--alpha", type=float, help="PPR teleport parameter.")
    parser.add_argument("--t", type=float, help="Heat kernel time.")
    parser.add_argument("--step", type=int, help="Step of the k-step classifier.")
    parser.add_argument("--iters", type=int, help="Label propagation iterations.")
    parser.add_argument("--lambda-o", type=float, help="Outlier penalty of r-AdaDIF.")
    parser.add_argument("--lambda-theta", type=float, help="Coefficient penalty of r-AdaDIF.")
    parser.add_argument("--ridge", type=float, help="Ridge added to the AdaDIF system.")
    parser.add_argument("--dictionary", action="store_true", help="Dictionary mode.")
    parser.add_argument(
        "--unconstrained", action="store_true", help="Hyperplane instead of simplex constraint."
    )
    parser.add_argument(
        "--exact-prox", action="store_true", help="Degree-weighted outlier update of r-AdaDIF."
    )


def add_sampling_arguments(parser):
    parser.add_argument("--per-class", type=int, help="Labeled nodes drawn per class.")
    parser.add_argument("--fraction", type=float, help="Fraction of all nodes drawn uniformly.")
    parser.add_argument("--p-cor", type=float, help="Probability of corrupting a drawn label.")
    parser.add_argument("--trials", type=int, help="Number of trials.")
