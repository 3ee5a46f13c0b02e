"""
Check that a network spec describes a realizable graph.
Exits with 0 when the graph is free of one- and two-cycles and with 1
otherwise, listing the offending edges.
"""

from networks.core import validate_graph
from networks.management.base import NetworkCommand


class Command(NetworkCommand):
    help = "Print the realizability verdict of a network spec."

    command_name = "validate"
    writes_reports = False

    def run(self, spec, options):
        graph = spec.graph()
        verdict = validate_graph(graph)
        self.stdout.write(str(verdict))
        report = self.new_report(spec)
        report.add_section("verdict", [
            ("status", verdict.status.value),
            ("one_cycles", list(verdict.one_cycles)),
            ("two_cycles", list(verdict.two_cycles)),
        ])
        return report, 0 if verdict.realizable else 1
