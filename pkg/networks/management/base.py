"""
Shared plumbing for the Networks management commands.
Loads the spec, runs the command, writes the report files, optionally
records the run, and turns toolkit errors into exit codes.
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from networks.exceptions import NetworkError
from networks.models import AnalysisRun
from networks.reports import Report
from networks.specfile import dump_spec, load_spec, preset_spec

logger = logging.getLogger(__name__)

USAGE_ERROR = 2


class NetworkCommand(BaseCommand):
    """
    Base class for commands that read one network spec.
    Subclasses implement run(spec, options) and return (report, status).
    """

    command_name = ""
    writes_reports = True

    def add_arguments(self, parser):
        parser.add_argument(
            "spec", nargs="?", help="Path of a network spec file."
        )
        parser.add_argument(
            "--preset", help="Use a built-in network instead of a file."
        )
        parser.add_argument(
            "--output-dir", help="Directory for the report files."
        )
        parser.add_argument(
            "--record", action="store_true",
            help="Store the run and its report in the database.",
        )

    def load(self, options):
        path, preset = options.get("spec"), options.get("preset")
        if bool(path) == bool(preset):
            raise CommandError(
                "give either a spec file or --preset", returncode=USAGE_ERROR
            )
        if preset:
            return preset_spec(preset), preset
        return load_spec(path), Path(path).stem

    def stem(self, source, report):
        return f"{source}_{report.command}"

    def handle(self, *args, **options):
        try:
            spec, source = self.load(options)
            report, status = self.run(spec, options)
        except NetworkError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code) from exc

        if self.writes_reports:
            paths = report.write(options.get("output_dir"),
                                 self.stem(source, report))
            for path in paths:
                self.stdout.write(f"wrote {path}")
        if options.get("record"):
            run = AnalysisRun.objects.create(
                command=self.command_name,
                kind=report.config.get("kind", ""),
                spec_text=dump_spec(spec),
                config=report.resolved_config(),
                report=report.body(),
                exit_status=status,
            )
            self.stdout.write(f"recorded run {run.pk}")
        if status:
            raise CommandError(f"{self.command_name} failed",
                               returncode=status)

    def new_report(self, spec, **extra):
        """Report whose echoed configuration is the spec plus `extra`."""
        config = spec.as_config()
        config.update({key: value for key, value in extra.items()
                       if value is not None})
        return Report(command=self.command_name, config=config)

    def run(self, spec, options):
        raise NotImplementedError
