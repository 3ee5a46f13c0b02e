"""
Unit tests for monomial maps, domain constraints and symbolic itineraries.
"""

from fractions import Fraction

import numpy as np
import sympy as sp
from django.test import SimpleTestCase

from networks.bowtie import bowtie_maps, bowtie_table, compute_parameters
from networks.core import equilibrium_data
from networks.exceptions import (
    NonPositiveExpanding,
    NonPositiveInput,
    SectionMismatch,
)
from networks.maps import (
    Orientation,
    SymbolicFlow,
    compose,
    domain_constraints,
    evaluate,
    global_map,
    iterate,
    local_map,
    map_from_text,
    path_realizable,
)
from networks.presets import build_preset


class LocalMapTests(SimpleTestCase):
    """Exponents of the linearized passage near an equilibrium."""

    def setUp(self):
        self.graph, self.field = build_preset("bowtie")
        self.eq = equilibrium_data(self.field, 2)

    def test_sections(self):
        step = local_map(self.eq, 1, 3)
        self.assertEqual(step.domain.orientation, Orientation.IN)
        self.assertEqual(step.domain.neighbor, 1)
        self.assertEqual(step.codomain.orientation, Orientation.OUT)
        self.assertEqual(step.domain_coords, (2, 3, 4, 5))
        self.assertEqual(step.codomain_coords, (1, 2, 4, 5))

    def test_exponents(self):
        step = local_map(self.eq, 1, 3)
        self.assertEqual(step.row(1), {2: 0, 3: Fraction(1, 2), 4: 0, 5: 0})
        self.assertEqual(step.row(2), {2: 1, 3: 1, 4: 0, 5: 0})
        self.assertEqual(step.row(4), {2: 0, 3: Fraction(-1, 2), 4: 1, 5: 0})
        self.assertEqual(step.exponent(5, 3), Fraction(3, 8))

    def test_negative_expanding_eigenvalue(self):
        with self.assertRaises(NonPositiveExpanding):
            local_map(self.eq, 3, 1)

    def test_exact_evaluation(self):
        step = local_map(self.eq, 1, 3)
        quarter = Fraction(1, 4)
        result = step.evaluate((1, quarter, quarter, quarter))
        self.assertEqual(result[0], Fraction(1, 2))
        self.assertEqual(result[1], Fraction(1, 4))
        self.assertEqual(result[2], Fraction(1, 2))
        self.assertIsInstance(result[3], float)
        self.assertAlmostEqual(result[3], 0.25 ** (11 / 8))

    def test_non_positive_input(self):
        step = local_map(self.eq, 1, 3)
        with self.assertRaises(NonPositiveInput):
            step.evaluate((1, 0, 0.5, 0.5))


class CompositionTests(SimpleTestCase):
    """Composition, inversion and iteration of monomial maps."""

    def setUp(self):
        self.graph, self.field = build_preset("bowtie")
        self.maps = bowtie_maps(self.field)
        self.params = compute_parameters(bowtie_table(self.field))

    def test_mismatched_sections(self):
        step = local_map(equilibrium_data(self.field, 2), 1, 3)
        with self.assertRaises(SectionMismatch):
            compose([step, step])

    def test_global_map_is_inserted(self):
        eq2 = equilibrium_data(self.field, 2)
        eq3 = equilibrium_data(self.field, 3)
        glued = compose([local_map(eq2, 1, 3), local_map(eq3, 2, 1)])
        explicit = compose([
            local_map(eq2, 1, 3), global_map(2, 3, 5), local_map(eq3, 2, 1)
        ])
        self.assertEqual(glued.exponents, explicit.exponents)

    def test_inverse(self):
        step = local_map(equilibrium_data(self.field, 2), 1, 4)
        identity = compose([step, step.inverse()])
        self.assertEqual(identity.exponents, sp.eye(4))

    def test_return_map_of_r_cycle(self):
        h_r = self.maps["h_R"]
        self.assertEqual(h_r.domain_coords, (3, 4, 5))
        self.assertEqual(h_r.row(3), {3: self.params.rho_tilde, 4: 0, 5: 0})
        self.assertEqual(h_r.row(4), {3: self.params.nu_tilde, 4: 1, 5: 0})
        self.assertEqual(h_r.row(5), {3: self.params.mu_tilde, 4: 0, 5: 1})

    def test_transition_map(self):
        g_rl = self.maps["g_RL"]
        self.assertEqual(g_rl.domain_coords, (3, 4, 5))
        self.assertEqual(g_rl.codomain_coords, (1, 3, 4))
        self.assertEqual(g_rl.row(1),
                         {3: 0, 4: self.params.mu, 5: self.params.alpha})
        self.assertEqual(g_rl.row(3),
                         {3: 1, 4: self.params.nu, 5: self.params.beta})
        self.assertEqual(
            g_rl.row(4),
            {3: 0, 4: self.params.rho,
             5: Fraction(4, 3) * self.params.rho},
        )

    def test_iterates_follow_the_closed_form(self):
        h_r = self.maps["h_R"]
        rho, nu = self.params.rho_tilde, self.params.nu_tilde
        for times in range(1, 5):
            power = iterate(h_r, times)
            self.assertEqual(power.exponent(3, 3), rho ** times)
            self.assertEqual(
                power.exponent(4, 3), nu * sum(rho ** i for i in range(times))
            )
            self.assertEqual(power.exponent(4, 4), 1)

    def test_evaluation_is_multiplicative(self):
        rng = np.random.default_rng(11)
        h_r = self.maps["h_R"]
        for _ in range(20):
            p = rng.uniform(0.01, 0.5, size=3)
            q = rng.uniform(0.01, 0.5, size=3)
            product = np.array(evaluate(h_r, p * q))
            separate = (np.array(evaluate(h_r, p))
                        * np.array(evaluate(h_r, q)))
            np.testing.assert_allclose(product, separate, rtol=1e-9)

    def test_composition_is_associative(self):
        first = local_map(equilibrium_data(self.field, 2), 1, 3)
        second = local_map(equilibrium_data(self.field, 3), 2, 1)
        third = local_map(equilibrium_data(self.field, 1), 3, 2)
        left = compose([compose([first, second]), third])
        right = compose([first, compose([second, third])])
        self.assertEqual(left.exponents, right.exponents)
        self.assertEqual(left.domain_coords, right.domain_coords)
        self.assertEqual(left.codomain_coords, right.codomain_coords)

    def test_iterates_add(self):
        h_r = self.maps["h_R"]
        for p in range(1, 5):
            for q in range(1, 5):
                with self.subTest(p=p, q=q):
                    joined = compose([iterate(h_r, p), iterate(h_r, q)])
                    self.assertEqual(iterate(h_r, p + q).exponents,
                                     joined.exponents)

    def test_text_form_is_lossless(self):
        g_rl = self.maps["g_RL"]
        parsed = map_from_text(g_rl.to_text())
        self.assertEqual(parsed, g_rl)
        self.assertEqual(parsed.label, g_rl.label)


class DomainConstraintTests(SimpleTestCase):
    """Walk domains pulled back to the initial section."""

    def test_bowtie_r_turn(self):
        graph, field = build_preset("bowtie")
        constraint = domain_constraints(field, [1, 2, 3, 1], graph)
        self.assertEqual(constraint.coords, (2, 3, 4, 5))
        self.assertEqual(len(constraint.inequalities), 1)
        ineq = constraint.inequalities[0]
        self.assertEqual(ineq.exponents, (0, Fraction(-1, 2), 1, 0))
        self.assertEqual((ineq.node, ineq.chosen, ineq.competitor),
                         (2, 3, 4))

    def test_central_ray_of_an_r_turn(self):
        graph, field = build_preset("bowtie")
        constraint = domain_constraints(field, [1, 2, 3, 1], graph)
        ray = constraint.central_ray()
        self.assertEqual(ray[0], 0.0)
        self.assertAlmostEqual(ray[1], -1.0, places=6)
        self.assertAlmostEqual(ray[2], -2.0, places=6)
        self.assertTrue(-2.0 - 1e-6 <= ray[3] <= -1.0 + 1e-6)
        self.assertTrue(constraint.mask_log((1.5 * ray).reshape(-1, 1))[0])

    def test_kirk_silber_walks(self):
        graph, field = build_preset("kirk-silber")
        self.assertTrue(path_realizable(field, [3, 1, 2, 3], graph))
        self.assertFalse(path_realizable(field, [4, 1, 2, 3], graph))

    def test_bowtie_walks(self):
        graph, field = build_preset("bowtie")
        self.assertTrue(path_realizable(field, [1, 2, 3, 1], graph))
        self.assertTrue(path_realizable(field, [1, 2, 4, 5], graph))


class SymbolicFlowTests(SimpleTestCase):
    """Itineraries predicted by the linearized maps."""

    def test_r_cycle_itinerary(self):
        graph, field = build_preset("bowtie")
        flow = SymbolicFlow(field, graph)
        logs = np.log([1.0, 1e-2, 1e-4, 1e-3])
        self.assertEqual(flow.itinerary(1, 2, logs, 2), [1, 2, 3, 1])
