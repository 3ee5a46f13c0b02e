"""
Integrate an ensemble of trajectories and compare their itineraries with
the predictions of the linearized maps.
Failed integrations are reported per run and never stop the ensemble.
Every run's sampled trajectory and box visits go to their own tables.
"""

from django.core.management.base import CommandError

from networks.management.base import USAGE_ERROR, NetworkCommand
from networks.serializers import SimulationSectionSerializer
from networks.simulation import IntegratorConfig, run_ensemble

DEFAULTS = {"count": 100, "seed": 0, "prefix": 5, "source": 1, "node": 2}
FLAGS = ("count", "seed", "epsilon", "prefix", "h", "t_max", "method",
         "source", "node", "workers", "samples")


class Command(NetworkCommand):
    help = "Compare simulated and predicted itineraries over an ensemble."

    command_name = "simulate"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--count", type=int, help="Ensemble size.")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--epsilon", type=float,
                            help="Box size around equilibria (default h).")
        parser.add_argument("--prefix", type=int,
                            help="Visits that must agree.")
        parser.add_argument("--h", type=float, help="Section offset.")
        parser.add_argument("--t-max", dest="t_max", type=float)
        parser.add_argument("--method")
        parser.add_argument("--source", type=int)
        parser.add_argument("--node", type=int)
        parser.add_argument("--workers", type=int)
        parser.add_argument("--samples", type=int,
                            help="Trajectory points written per run.")

    def settings_for(self, spec, options):
        """Spec values overridden by flags, validated like a spec file."""
        values = {**DEFAULTS, **spec.simulation}
        values.update({key: options[key] for key in FLAGS
                       if options.get(key) is not None})
        serializer = SimulationSectionSerializer(data=values)
        if not serializer.is_valid():
            problems = "; ".join(
                f"{key}: {' '.join(str(m) for m in messages)}"
                for key, messages in serializer.errors.items()
            )
            raise CommandError(problems, returncode=USAGE_ERROR)
        return {**DEFAULTS, **serializer.validated_data}

    def run(self, spec, options):
        values = self.settings_for(spec, options)
        report = self.new_report(spec, kind="ensemble", simulation={
            key: value for key, value in values.items()
        })
        graph, field = spec.build()
        coords = [f"x_{k}" for k in range(1, field.n + 1)]
        fields = ["run", "start", "predicted", "observed", "prefix", "error"]
        trajectory_fields = ["run", "t", *coords]
        visit_fields = ["run", "node", "entry_time", "exit_time", *coords]
        if values["count"] == 0:
            report.add_table("runs", fields, [])
            report.add_table("trajectories", trajectory_fields, [])
            report.add_table("visits", visit_fields, [])
            report.add_section("summary", [
                ("count", 0), ("agreeing", 0), ("fraction", 0.0),
            ])
            self.stdout.write("empty ensemble")
            return report, 0

        cfg = IntegratorConfig.from_settings(
            method=values.get("method"), t_max=values.get("t_max")
        )
        ensemble = run_ensemble(
            field, graph, values["count"], values["seed"],
            source=values["source"], node=values["node"],
            epsilon=values.get("epsilon"), prefix=values["prefix"],
            h=values.get("h"), cfg=cfg, workers=values.get("workers"),
            samples=values.get("samples"),
        )
        rows = [
            (
                member.index,
                "; ".join(f"x{k}={v!r}" for k, v in member.values),
                member.predicted,
                member.observed,
                member.prefix,
                member.error,
            )
            for member in ensemble.members
        ]
        report.add_table("runs", fields, rows)
        report.add_table("trajectories", trajectory_fields, [
            (member.index, *sample)
            for member in ensemble.members for sample in member.samples
        ])
        report.add_table("visits", visit_fields, [
            (member.index, *visit.as_row())
            for member in ensemble.members for visit in member.visits
        ])
        failures = sum(1 for member in ensemble.members if member.error)
        report.add_section("summary", [
            ("count", len(ensemble.members)),
            ("seed", ensemble.seed),
            ("prefix", ensemble.prefix),
            ("agreeing", ensemble.agreeing),
            ("fraction", ensemble.fraction),
            ("failures", failures),
        ])
        self.stdout.write(
            f"{ensemble.agreeing} of {len(ensemble.members)} runs agree on"
            f" {ensemble.prefix} visits ({ensemble.fraction:.1%})"
        )
        return report, 0
