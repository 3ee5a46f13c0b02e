"""
Unit tests for graph validation, field synthesis and eigenvalue bookkeeping.
"""

from fractions import Fraction
import random

import numpy as np
from django.test import SimpleTestCase

from networks.conf import hetnet_settings
from networks.core import (
    DirectedGraph,
    Margins,
    Realizability,
    RoleKind,
    build_simplex_field,
    classify_roles,
    equilibrium_data,
    spectrum_deviation,
    validate_graph,
)
from networks.exceptions import (
    GraphNotRealizable,
    NetworkError,
    SignContradiction,
)
from networks.presets import build_preset

THREE_CYCLE = DirectedGraph.from_pairs(3, [(1, 2), (2, 3), (3, 1)])


class GraphValidationTests(SimpleTestCase):
    """Realizability verdicts list every offending edge."""

    def test_bowtie_is_realizable(self):
        graph, _ = build_preset("bowtie")
        verdict = validate_graph(graph)
        self.assertTrue(verdict.realizable)
        self.assertEqual(str(verdict), "Realizable")

    def test_two_cycle_is_reported(self):
        graph = DirectedGraph.from_pairs(3, [(1, 2), (2, 1), (2, 3)])
        verdict = validate_graph(graph)
        self.assertEqual(verdict.status, Realizability.HAS_TWO_CYCLE)
        self.assertEqual(verdict.two_cycles, ((1, 2), (2, 1)))

    def test_loop_is_reported(self):
        graph = DirectedGraph.from_pairs(2, [(1, 1), (1, 2)])
        verdict = validate_graph(graph)
        self.assertEqual(verdict.status, Realizability.HAS_ONE_CYCLE)
        self.assertEqual(verdict.one_cycles, ((1, 1),))

    def test_edges_outside_the_nodes_are_rejected(self):
        with self.assertRaises(NetworkError):
            DirectedGraph.from_pairs(2, [(1, 3)])

    def test_is_walk(self):
        self.assertTrue(THREE_CYCLE.is_walk([1, 2, 3, 1]))
        self.assertFalse(THREE_CYCLE.is_walk([1, 3]))


class SimplexFieldTests(SimpleTestCase):
    """Synthesized coefficients follow the edge roles."""

    def test_kirk_silber_entries(self):
        graph = DirectedGraph.from_pairs(
            4, [(1, 2), (2, 3), (3, 1), (2, 4), (4, 1)]
        )
        field = build_simplex_field(graph)
        self.assertEqual(field.coefficient(1, 2), 1)
        self.assertEqual(field.coefficient(2, 1), -1)
        self.assertEqual(field.coefficient(1, 4), -1)
        self.assertEqual(field.coefficient(3, 4), Fraction(-1, 2))
        self.assertEqual(field.coefficient(4, 4), 0)

    def test_margins_and_overrides(self):
        field = build_simplex_field(
            THREE_CYCLE, Margins(e=Fraction(3), c=Fraction(5, 2)),
            {(1, 3): "-7/3"},
        )
        self.assertEqual(field.coefficient(1, 2), 3)
        self.assertEqual(field.coefficient(2, 1), Fraction(-5, 2))
        self.assertEqual(field.coefficient(1, 3), Fraction(-7, 3))

    def test_two_cycle_cannot_be_built(self):
        graph = DirectedGraph.from_pairs(2, [(1, 2), (2, 1)])
        with self.assertRaises(GraphNotRealizable):
            build_simplex_field(graph)

    def test_diagonal_override_is_rejected(self):
        with self.assertRaises(NetworkError):
            build_simplex_field(THREE_CYCLE, overrides={(2, 2): 1})

    def test_margins_must_be_positive(self):
        with self.assertRaises(NetworkError):
            Margins(t=Fraction(0))

    def test_equilibria_are_fixed_points(self):
        _, field = build_preset("bowtie")
        for j in range(1, field.n + 1):
            value = field.vector_field(field.equilibrium(j))
            self.assertTrue(np.allclose(value, 0.0))


class SpectrumTests(SimpleTestCase):
    """Analytic spectra against numerical Jacobians."""

    def test_eigenvalues_are_coefficients(self):
        _, field = build_preset("bowtie")
        data = equilibrium_data(field, 2)
        self.assertEqual(data.eigenvalue(2), -2)
        self.assertEqual(data.eigenvalue(3), 2)
        self.assertEqual(data.eigenvalue(5), Fraction(-3, 4))
        self.assertEqual(data.unstable_directions(), [3, 4])

    def test_numerical_jacobian_matches(self):
        rng = random.Random(11)
        graph = DirectedGraph.from_pairs(
            4, [(1, 2), (2, 3), (3, 1), (2, 4), (4, 1)]
        )
        for _ in range(100):
            overrides = {
                (i, j): Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
                for i in range(1, 5) for j in range(1, 5) if i != j
            }
            field = build_simplex_field(graph, overrides=overrides)
            for j in range(1, 5):
                self.assertLess(spectrum_deviation(field, j),
                                hetnet_settings.JACOBIAN_TOLERANCE)

    def test_sign_flips_commute_with_the_field(self):
        _, field = build_preset("bowtie")
        rng = np.random.default_rng(4)
        for _ in range(50):
            x = rng.uniform(-0.6, 0.6, size=field.n)
            flips = rng.choice([-1.0, 1.0], size=field.n)
            np.testing.assert_array_equal(
                field.vector_field(flips * x), flips * field.vector_field(x)
            )
            np.testing.assert_array_equal(
                field.growth_rates(flips * x), field.growth_rates(x)
            )

    def test_analytic_jacobian(self):
        _, field = build_preset("house")
        x = np.array([0.3, 0.2, 0.1, 0.4, 0.05])
        self.assertTrue(
            np.allclose(field.jacobian(x), field.numerical_jacobian(x),
                        atol=1e-7)
        )


class RoleTests(SimpleTestCase):
    """Roles of the eigenvalues at a node of a cycle."""

    def test_bowtie_r_cycle_at_node_two(self):
        graph, field = build_preset("bowtie")
        roles = dict(classify_roles(field, [1, 2, 3, 1], 2, graph))
        self.assertEqual(roles[2].kind, RoleKind.RADIAL)
        self.assertEqual(roles[1].kind, RoleKind.CONTRACTING)
        self.assertEqual(roles[3].kind, RoleKind.EXPANDING)
        self.assertEqual(roles[4].kind, RoleKind.TRANSVERSE)
        self.assertEqual(roles[4].value, 1)
        self.assertEqual(roles[5].kind, RoleKind.TRANSVERSE)

    def test_sign_contradiction(self):
        field = build_simplex_field(THREE_CYCLE, overrides={(2, 3): -1})
        with self.assertRaises(SignContradiction):
            classify_roles(field, [1, 2, 3], 2)

    def test_node_off_the_cycle(self):
        graph, field = build_preset("bowtie")
        with self.assertRaises(NetworkError):
            classify_roles(field, [1, 2, 3], 4, graph)
