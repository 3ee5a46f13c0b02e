"""
Synthesize the simplex field of a network spec.
Writes the exact coefficient matrix and the spectrum of every equilibrium,
with the deviation from a numerical Jacobian as a check.
"""

import logging

from networks.conf import hetnet_settings
from networks.core import equilibrium_data, spectrum_deviation
from networks.management.base import NetworkCommand
from networks.maps import format_rational

logger = logging.getLogger(__name__)


class Command(NetworkCommand):
    help = "Build the coefficient matrix and spectra of a network spec."

    command_name = "build"

    def run(self, spec, options):
        graph, field = spec.build()
        n = field.n
        report = self.new_report(spec)

        columns = ["row"] + [f"a_{j}" for j in range(1, n + 1)]
        matrix = [
            [i] + [format_rational(field.coefficient(i, j))
                   for j in range(1, n + 1)]
            for i in range(1, n + 1)
        ]
        report.add_table("matrix", columns, matrix)

        spectrum = []
        deviations = []
        step = hetnet_settings.JACOBIAN_STEP
        for j in range(1, n + 1):
            data = equilibrium_data(field, j)
            for direction, value in enumerate(data.eigenvalues(), start=1):
                spectrum.append((j, direction, format_rational(value)))
            deviation = spectrum_deviation(field, j, step)
            if deviation > hetnet_settings.JACOBIAN_TOLERANCE:
                logger.warning("Spectrum at xi_%d deviates by %g", j,
                               deviation)
            deviations.append((f"xi_{j}", deviation))
        report.add_table("spectrum", ["node", "direction", "eigenvalue"],
                         spectrum)
        report.add_section("network", [
            ("nodes", n),
            ("edges", ", ".join(f"{i}-{j}" for i, j in graph.sorted_edges())),
        ])
        report.add_section("jacobian_deviation", deviations)
        self.stdout.write(
            "\n".join(",".join(str(cell) for cell in row) for row in matrix)
        )
        return report, 0
