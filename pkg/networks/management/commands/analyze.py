"""
Run a switching analysis on a network spec.
The analysis kind comes from --kind, from the [analysis] section or from
the defaults of a preset, in that order.
"""

from django.core.management.base import CommandError

from networks.analyses import RUNNERS
from networks.management.base import USAGE_ERROR, NetworkCommand
from networks.serializers import ANALYSIS_KINDS


class Command(NetworkCommand):
    help = "Run a common-connection, House, Bowtie, shadow or chain analysis."

    command_name = "analyze"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--kind", choices=ANALYSIS_KINDS)
        parser.add_argument("--epsilon", type=float,
                            help="Box size of the sampling grid.")
        parser.add_argument("--points", type=int,
                            help="Grid points per coordinate.")
        parser.add_argument("--turns", type=int,
                            help="Number of Bowtie turns to tabulate.")

    def run(self, spec, options):
        kind = options.get("kind")
        if kind is not None and kind not in ANALYSIS_KINDS:
            raise CommandError(f"unknown analysis kind {kind!r}",
                               returncode=USAGE_ERROR)
        values = spec.resolved_analysis(kind)
        for key in ("epsilon", "points", "turns"):
            if options.get(key) is not None:
                values[key] = options[key]
        graph, field = spec.build()
        report = self.new_report(spec, kind=values["kind"],
                                 flags=_flags(options))
        RUNNERS[values["kind"]](field, graph, values, report)
        for title, items in report.sections:
            self.stdout.write(f"[{title}]")
            for key, value in items:
                self.stdout.write(f"{key} = {value}")
        return report, 0

    def stem(self, source, report):
        return f"{source}_{report.command}_{report.config['kind']}"


def _flags(options):
    return {
        key: options[key] for key in ("epsilon", "points", "turns")
        if options.get(key) is not None
    }
