"""
Unit tests for integration, itinerary recording and ensemble comparison.
"""

from fractions import Fraction
import math
from unittest.mock import patch

import numpy as np
from django.core.exceptions import ImproperlyConfigured
from django.test import SimpleTestCase, override_settings

from networks.conf import hetnet_settings
from networks.core import DirectedGraph, Margins, build_simplex_field
from networks.exceptions import (
    Blowup,
    ItineraryError,
    PreconditionViolation,
)
from networks.presets import build_preset
from networks.simulation import (
    IntegratorConfig,
    compare,
    connection_shifts,
    integrate,
    predict_nodes,
    record_itinerary,
    run_ensemble,
    section_point,
)

THREE_CYCLE = DirectedGraph.from_pairs(3, [(1, 2), (2, 3), (3, 1)])
OPEN_CHAIN = DirectedGraph.from_pairs(3, [(1, 2), (2, 3)])


class IntegratorConfigTests(SimpleTestCase):
    """Validation of integrator options."""

    def test_defaults_come_from_settings(self):
        cfg = IntegratorConfig.from_settings(t_max=10.0)
        self.assertEqual(cfg.method, "DOP853")
        self.assertEqual(cfg.t_max, 10.0)

    def test_unknown_method(self):
        with self.assertRaises(PreconditionViolation):
            IntegratorConfig(method="Euler")

    def test_non_positive_limits(self):
        with self.assertRaises(PreconditionViolation):
            IntegratorConfig(t_max=0)


class SettingsTests(SimpleTestCase):
    """HETNET settings are merged over the defaults."""

    @override_settings(HETNET={"GRID_POINTS": 12})
    def test_override(self):
        self.assertEqual(hetnet_settings.GRID_POINTS, 12)
        self.assertEqual(hetnet_settings.WITNESS_FACTOR, Fraction(1, 2))

    @override_settings(HETNET={"GRID_SIZE": 12})
    def test_unknown_key(self):
        with self.assertRaises(ImproperlyConfigured):
            hetnet_settings.GRID_POINTS


class IntegrationTests(SimpleTestCase):
    """Trajectories of a synthesized three-node cycle."""

    def setUp(self):
        self.field = build_simplex_field(THREE_CYCLE, Margins(c=Fraction(2)))
        self.cfg = IntegratorConfig(t_max=60.0)

    def test_invariant_hyperplanes(self):
        trajectory = integrate(self.field, [0.9, 0.1, 0.0], self.cfg)
        self.assertTrue(np.all(trajectory.x[:, 2] == 0.0))
        self.assertLess(abs(np.linalg.norm(trajectory.final) - 1.0), 1e-6)

    def test_blowup_is_reported(self):
        with self.assertRaises(Blowup):
            integrate(self.field, [2.0, 0.0, 0.0], self.cfg)

    def test_sign_flips_mirror_the_trajectory(self):
        x0 = np.array([0.9, 0.1, 1e-3])
        trajectory = integrate(self.field, x0, self.cfg)
        flipped = integrate(self.field, x0 * [1, -1, -1], self.cfg)
        np.testing.assert_array_equal(flipped.t, trajectory.t)
        np.testing.assert_array_equal(flipped.x[:, 0], trajectory.x[:, 0])
        np.testing.assert_array_equal(flipped.x[:, 1:], -trajectory.x[:, 1:])

    def test_tiny_coordinates_keep_their_accuracy(self):
        x0 = section_point(3, 2, 1, {3: 1e-30}, h=0.1)
        trajectory = integrate(self.field, x0,
                               IntegratorConfig(t_max=20.0))
        self.assertTrue(np.all(trajectory.x > 0))
        growth = math.log(trajectory.final[2] / x0[2])
        self.assertAlmostEqual(
            growth, 20.0 * float(self.field.coefficient(2, 3)), delta=0.05
        )

    def test_visits_follow_the_cycle(self):
        x0 = section_point(3, 2, 1, {3: 0.1}, h=0.1)
        itinerary = record_itinerary(self.field, x0, 0.1, self.cfg,
                                     THREE_CYCLE)
        self.assertEqual(itinerary.nodes[:3], [2, 3, 1])
        for before, after in zip(itinerary.visits, itinerary.visits[1:]):
            self.assertLess(before.entry_time, before.exit_time)
            self.assertLessEqual(before.exit_time, after.entry_time)
        entry = itinerary.visits[1].entry_point
        self.assertAlmostEqual(abs(entry[1]), 0.1, places=6)

    def test_missing_connection_cuts_the_itinerary(self):
        x0 = section_point(3, 2, 1, {3: 0.1}, h=0.1)
        with self.assertLogs("networks.simulation", "WARNING"):
            itinerary = record_itinerary(self.field, x0, 0.1, self.cfg,
                                         OPEN_CHAIN)
        self.assertEqual(itinerary.nodes, [2, 3])

    def test_strict_itinerary_raises(self):
        x0 = section_point(3, 2, 1, {3: 0.1}, h=0.1)
        with self.assertRaises(ItineraryError):
            record_itinerary(self.field, x0, 0.1, self.cfg, OPEN_CHAIN,
                             strict=True)

    def test_box_size_is_checked(self):
        with self.assertRaises(PreconditionViolation):
            record_itinerary(self.field, [0.9, 0.1, 0.0], epsilon=0.8)


class ConnectionShiftTests(SimpleTestCase):
    """Corrections to the identity global maps of a three-node cycle."""

    def setUp(self):
        self.field = build_simplex_field(THREE_CYCLE, Margins(c=Fraction(2)))

    def test_one_shift_per_connection(self):
        shifts = connection_shifts(self.field, THREE_CYCLE, h=0.1)
        self.assertEqual(set(shifts), set(THREE_CYCLE.edges))
        # H_2^{in,1} has active coordinates (2, 3); x2 is radial there
        self.assertEqual(shifts[(1, 2)].shape, (2,))
        self.assertEqual(shifts[(1, 2)][0], 0.0)

    def test_shift_matches_a_full_trajectory(self):
        h, small = 0.1, 1e-8
        shift = connection_shifts(self.field, THREE_CYCLE, h=h)[(1, 2)][1]
        x0 = [math.sqrt(1.0 - h * h - small * small), h, small]
        trajectory = integrate(self.field, x0, IntegratorConfig(t_max=12.0))
        times, states = trajectory.samples(20001)
        # x1 decreases along the connection and near xi_2
        arrival = np.interp(h, states[::-1, 0], times[::-1])
        index = np.searchsorted(times, arrival)
        measured = np.interp(
            arrival, times[index - 1:index + 1],
            np.log(states[index - 1:index + 1, 2]),
        ) - math.log(small)
        self.assertAlmostEqual(measured, shift, places=3)

    def test_predictions_use_the_shifts(self):
        shifts = connection_shifts(self.field, THREE_CYCLE, h=0.1)
        x0 = section_point(3, 2, 1, {3: 0.1}, h=0.1)
        nodes = predict_nodes(self.field, x0, 1, 2, 5, THREE_CYCLE, 0.1,
                              shifts)
        self.assertEqual(nodes, [1, 2, 3, 1, 2, 3, 1])


class SectionPointTests(SimpleTestCase):
    """Physical points on an incoming cross-section."""

    def test_coordinates(self):
        x = section_point(5, 2, 1, {3: 0.5, 4: 0.1}, h=0.1)
        self.assertAlmostEqual(x[0], 0.1)
        self.assertAlmostEqual(x[2], 0.05)
        self.assertAlmostEqual(x[3], 0.01)
        self.assertEqual(x[4], 0.0)
        self.assertAlmostEqual(np.linalg.norm(x), 1.0)


class CompareTests(SimpleTestCase):
    """Agreement between predicted and observed visit words."""

    def test_prefix_and_turn_deltas(self):
        agreement = compare("RLLR", "RLRR")
        self.assertEqual(agreement.prefix, 2)
        self.assertEqual(agreement.turn_deltas, (0, -1, 1))
        self.assertTrue(agreement.agrees(2))
        self.assertFalse(agreement.agrees(3))

    def test_truncated_comparison(self):
        self.assertEqual(compare("RLLR", "RLRR", k=2).prefix, 2)

    def test_empty_words(self):
        with self.assertRaises(PreconditionViolation):
            compare("", "R")


class EnsembleTests(SimpleTestCase):
    """Seeded ensembles with the integrator replaced by a stub."""

    def setUp(self):
        self.graph, self.field = build_preset("bowtie")

    def test_empty_ensemble(self):
        with self.assertRaises(PreconditionViolation):
            run_ensemble(self.field, self.graph, 0, seed=1)

    @patch("networks.simulation.record_itinerary")
    def test_same_seed_same_members(self, record):
        record.side_effect = Blowup("left the ball")
        first = run_ensemble(self.field, self.graph, 3, seed=5, prefix=2,
                             workers=1)
        second = run_ensemble(self.field, self.graph, 3, seed=5, prefix=2,
                              workers=1)
        self.assertEqual([m.values for m in first.members],
                         [m.values for m in second.members])
        self.assertEqual(record.call_count, 6)

    @patch("networks.simulation.record_itinerary")
    def test_failures_are_reported_per_run(self, record):
        record.side_effect = Blowup("left the ball")
        report = run_ensemble(self.field, self.graph, 2, seed=0, prefix=2,
                              workers=1)
        self.assertEqual(len(report.members), 2)
        for member in report.members:
            self.assertEqual(member.prefix, 0)
            self.assertIn("left the ball", member.error)
        self.assertEqual(report.agreeing, 0)
        self.assertTrue(math.isclose(report.fraction, 0.0))


class BowtieEnsembleTests(SimpleTestCase):
    """Integrated ensembles against the calibrated predictions."""

    def setUp(self):
        self.graph, self.field = build_preset("bowtie")

    def test_predictions_agree_on_five_visits(self):
        report = run_ensemble(self.field, self.graph, 20, seed=2024,
                              prefix=5, workers=1, samples=50)
        failures = [m.error for m in report.members if m.error]
        self.assertEqual(failures, [])
        self.assertGreaterEqual(report.fraction, 0.9)
        member = report.members[0]
        self.assertEqual(len(member.samples), 50)
        self.assertEqual(len(member.samples[0]), 1 + self.field.n)
        self.assertEqual(member.visits[0].node, 2)
        self.assertTrue(self.graph.is_walk(
            [visit.node for visit in member.visits]
        ))
