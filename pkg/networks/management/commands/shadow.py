"""
Search the entry section of a walk for a point that follows it.
"""

from django.core.management.base import CommandError
from rest_framework import serializers

from networks.analyses import run_shadow
from networks.management.base import USAGE_ERROR, NetworkCommand
from networks.serializers import NodeListField


class Command(NetworkCommand):
    help = "Grid search for a point whose linearized itinerary is a walk."

    command_name = "shadow"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--walk", help="Node walk, e.g. '4, 1, 2, 3'.")
        parser.add_argument("--epsilon", type=float)
        parser.add_argument("--points", type=int)
        parser.add_argument("--decades", type=int)

    def run(self, spec, options):
        values = dict(spec.analysis)
        if options.get("walk"):
            try:
                values["walk"] = NodeListField().to_internal_value(
                    options["walk"]
                )
            except serializers.ValidationError as exc:
                raise CommandError(f"--walk: {exc.detail[0]}",
                                   returncode=USAGE_ERROR) from exc
        if "walk" not in values:
            raise CommandError("give a walk with --walk or in [analysis]",
                               returncode=USAGE_ERROR)
        for key in ("epsilon", "points", "decades"):
            if options.get(key) is not None:
                values[key] = options[key]
        graph, field = spec.build()
        report = self.new_report(
            spec, kind="shadow",
            walk=", ".join(str(node) for node in values["walk"]),
        )
        result = run_shadow(field, graph, values, report)
        self.stdout.write(str(result))
        return report, 0
