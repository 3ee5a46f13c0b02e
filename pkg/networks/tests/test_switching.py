"""
Unit tests for cusp geometry and the common-connection path verdicts.
"""

import math
import random
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from networks.exceptions import (
    Assumption1Violated,
    DegenerateCusp,
    WiringMismatch,
)
from networks.maps import Side
from networks.presets import build_preset
from networks.switching import (
    PATHS,
    CommonConnectionConfig,
    CuspRegion,
    CuspSide,
    GridSpec,
    PathStatus,
    PsiKind,
    Thickness,
    analyze_common_connection,
    classify_paths,
    common_connection_evidence,
    cusp_contained,
    cusp_relations,
    cusps_intersect,
    house_regions,
    sequence_corollary_check,
    shadowing_grid,
    verify_shadowing,
)

PLANE = (3, 4)


def cusp(q, side):
    return CuspRegion(PLANE, Fraction(q), side)


def config(c_alpha, c_a, e_beta, e_b, **kwargs):
    values = dict(first=1, second=2, alpha=3, a=4, beta=3, b=4)
    values.update(kwargs)
    return CommonConnectionConfig(
        c_alpha=c_alpha, c_a=c_a, e_beta=e_beta, e_b=e_b, **values
    )


class CuspTests(SimpleTestCase):
    """Thin and thick parts and their set relations."""

    def test_thickness(self):
        self.assertEqual(cusp(2, CuspSide.BELOW).thickness, Thickness.THIN)
        self.assertEqual(cusp("1/2", CuspSide.BELOW).thickness,
                         Thickness.THICK)
        self.assertEqual(cusp(2, CuspSide.ABOVE).thickness, Thickness.THICK)
        self.assertEqual(cusp("1/2", CuspSide.ABOVE).thickness,
                         Thickness.THIN)
        self.assertEqual(cusp(1, CuspSide.ABOVE).thickness,
                         Thickness.DEGENERATE)

    def test_degenerate_cusps(self):
        with self.assertRaises(DegenerateCusp):
            cusp(1, CuspSide.BELOW).thin()
        with self.assertRaises(DegenerateCusp):
            cusp(0, CuspSide.BELOW)

    def test_log_membership_matches(self):
        rng = np.random.default_rng(5)
        h = rng.uniform(1e-3, 0.5, size=200)
        v = rng.uniform(1e-3, 0.5, size=200)
        for q in ("1/3", "3/2", 2):
            for side in (CuspSide.BELOW, CuspSide.ABOVE):
                region = cusp(q, side)
                with self.subTest(q=q, side=side):
                    np.testing.assert_array_equal(
                        region.contains_log(np.log(h), np.log(v)),
                        region.contains(h, v),
                    )

    def test_intersections(self):
        self.assertTrue(cusps_intersect(cusp(2, CuspSide.BELOW),
                                        cusp(3, CuspSide.BELOW)))
        self.assertTrue(cusps_intersect(cusp(2, CuspSide.BELOW),
                                        cusp(3, CuspSide.ABOVE)))
        self.assertFalse(cusps_intersect(cusp(3, CuspSide.BELOW),
                                         cusp(2, CuspSide.ABOVE)))

    def test_containment(self):
        self.assertTrue(cusp_contained(cusp(3, CuspSide.BELOW),
                                       cusp(2, CuspSide.BELOW)))
        self.assertFalse(cusp_contained(cusp(2, CuspSide.BELOW),
                                        cusp(3, CuspSide.BELOW)))
        self.assertFalse(cusp_contained(cusp(2, CuspSide.BELOW),
                                        cusp(2, CuspSide.ABOVE)))

    def test_transposed_region_is_the_same_set(self):
        region = cusp(2, CuspSide.BELOW)
        swapped = region.transposed()
        self.assertEqual(swapped.plane, (4, 3))
        self.assertEqual(swapped.q, Fraction(1, 2))
        self.assertEqual(swapped.side, CuspSide.ABOVE)
        self.assertTrue(region.contains(0.1, 0.001))
        self.assertTrue(swapped.contains(0.001, 0.1))
        self.assertTrue(cusps_intersect(region, swapped))

    def test_relations_agree_with_grid(self):
        relations = cusp_relations(cusp(2, CuspSide.BELOW),
                                   cusp(3, CuspSide.BELOW))
        self.assertFalse(relations.first_thick_contains_second_thin)
        self.assertTrue(relations.thick_intersection)
        self.assertTrue(relations.thin_intersection)
        self.assertFalse(relations.first_in_second)
        self.assertTrue(relations.second_in_first)
        self.assertTrue(relations.coincident_axes)
        self.assertTrue(relations.grid_agrees)

    def test_sampled_points_respect_the_relations(self):
        rng = random.Random(17)
        samples = np.random.default_rng(17)
        h, v = 10.0 ** samples.uniform(-8, -2, size=(2, 2000))
        quarters = [Fraction(k, 4) for k in range(1, 13) if k != 4]
        for _ in range(40):
            first = cusp(rng.choice(quarters),
                         rng.choice([CuspSide.BELOW, CuspSide.ABOVE]))
            second = cusp(rng.choice(quarters),
                          rng.choice([CuspSide.BELOW, CuspSide.ABOVE]))
            if rng.random() < 0.5:
                second = second.transposed()
            relations = cusp_relations(first, second)
            other = second.in_plane(first.plane)
            with self.subTest(first=str(first), second=str(second)):
                for region in (first, other):
                    thin = region.thin().contains(h, v)
                    thick = region.thick().contains(h, v)
                    self.assertTrue(np.all(thin ^ thick))
                checks = (
                    (relations.first_in_second, first, other),
                    (relations.second_in_first, other, first),
                    (relations.first_thick_contains_second_thin,
                     other.thin(), first.thick()),
                    (relations.second_thick_contains_first_thin,
                     first.thin(), other.thick()),
                )
                for holds, inner, outer in checks:
                    if holds:
                        self.assertFalse(np.any(
                            inner.contains(h, v) & ~outer.contains(h, v)
                        ))
                disjoint = (
                    (relations.regions_intersect, first, other),
                    (relations.thin_intersection, first.thin(),
                     other.thin()),
                    (relations.thick_intersection, first.thick(),
                     other.thick()),
                )
                for meets, one, two in disjoint:
                    if not meets:
                        self.assertFalse(np.any(
                            one.contains(h, v) & two.contains(h, v)
                        ))


class CommonConnectionTests(SimpleTestCase):
    """Path verdicts through a shared connection."""

    def test_kirk_silber_misses_one_path(self):
        _, field = build_preset("kirk-silber")
        cfg = CommonConnectionConfig.from_field(field, 1, 2, 3, 4, 3, 4)
        self.assertEqual(cfg.incoming_ratio, Fraction(1, 2))
        self.assertEqual(cfg.outgoing_ratio, Fraction(2))
        verdict = classify_paths(cfg)
        self.assertEqual(verdict.missing(), ["a12beta"])
        self.assertEqual(verdict.status("a", "b"), PathStatus.REALIZED)
        self.assertEqual(verdict.status("alpha", "beta"), PathStatus.REALIZED)

    def test_swapped_ratios_miss_the_other_path(self):
        verdict = classify_paths(config(1, 2, 2, 1))
        self.assertEqual(verdict.missing(), ["alpha12b"])

    def test_equal_ratios_are_degenerate(self):
        verdict = classify_paths(config(1, 2, 1, 2))
        self.assertEqual(verdict.status("a", "beta"), PathStatus.DEGENERATE)
        self.assertEqual(verdict.status("alpha", "b"), PathStatus.DEGENERATE)
        self.assertEqual(verdict.missing(), [])

    def test_general_linear_table(self):
        kappa = ((1, 2), (3, 1))
        cases = {
            # (c_a / c_alpha, e_b / e_beta): missing path
            (2, 2): "alpha12beta",
            (Fraction(1, 2), Fraction(1, 2)): "a12b",
            (Fraction(1, 2), 2): "a12beta",
            (2, Fraction(1, 2)): "alpha12b",
        }
        for (q1, q2), missing in cases.items():
            with self.subTest(q1=q1, q2=q2):
                cfg = config(1, q1, 1, q2, psi=PsiKind.GENERAL_LINEAR,
                             kappa=kappa)
                self.assertEqual(classify_paths(cfg).missing(), [missing])

    def test_general_linear_grid_evidence(self):
        kappa = ((1, 2), (3, 1))
        cases = {
            (2, 2): "alpha12beta",
            (Fraction(1, 2), Fraction(1, 2)): "a12b",
            (Fraction(1, 2), 2): "a12beta",
            (2, Fraction(1, 2)): "alpha12b",
        }
        for (q1, q2), missing in cases.items():
            with self.subTest(q1=q1, q2=q2):
                cfg = config(1, q1, 1, q2, psi=PsiKind.GENERAL_LINEAR,
                             kappa=kappa)
                evidence = common_connection_evidence(cfg, points=24)
                self.assertIsNone(evidence[missing])
                found = [name for name, point in evidence.items()
                         if point is not None]
                self.assertEqual(len(found), 3)

    def test_planes_must_match(self):
        cfg = config(1, 2, 2, 1, b=5)
        with self.assertRaises(Assumption1Violated):
            classify_paths(cfg)
        verdict = analyze_common_connection(cfg)
        self.assertEqual(verdict.missing(), [])
        self.assertTrue(all(status is PathStatus.REALIZED
                            for _, status in verdict.statuses))

    def test_singular_kappa_is_undecided(self):
        cfg = config(1, 2, 2, 1, psi=PsiKind.GENERAL_LINEAR,
                     kappa=((1, 2), (2, 4)))
        with self.assertRaises(Assumption1Violated):
            classify_paths(cfg)
        verdict = analyze_common_connection(cfg)
        self.assertTrue(all(status is PathStatus.UNKNOWN
                            for _, status in verdict.statuses))

    def test_grid_evidence(self):
        _, field = build_preset("kirk-silber")
        cfg = CommonConnectionConfig.from_field(field, 1, 2, 3, 4, 3, 4)
        evidence = common_connection_evidence(cfg, points=24)
        self.assertIsNone(evidence["a12beta"])
        for name in ("a12b", "alpha12b", "alpha12beta"):
            self.assertIsNotNone(evidence[name])

    def test_chain_of_one_connection(self):
        graph, field = build_preset("kirk-silber")
        verdict = sequence_corollary_check(field, [1, 2], 3, 4, 3, 4, graph)
        self.assertEqual(verdict.missing(), ["a12beta"])


class HouseTests(SimpleTestCase):
    """All four switching regions of the house network."""

    def test_four_regions(self):
        graph, field = build_preset("house")
        regions = house_regions(field, graph)
        self.assertEqual(
            [(r.source, r.target) for r in regions],
            [(3, 3), (3, 4), (5, 3), (5, 4)],
        )
        for region in regions:
            for ineq in region.inequalities:
                self.assertIs(ineq.side(region.witness), Side.INSIDE)

    def test_random_eigenvalues(self):
        rng = random.Random(23)
        for _ in range(50):
            c13, c15, e23, e24 = (Fraction(rng.randint(1, 12), 4)
                                  for _ in range(4))
            graph, field = build_preset("house", overrides={
                (1, 3): -c13, (1, 5): -c15, (2, 3): e23, (2, 4): e24,
            })
            with self.subTest(c13=c13, c15=c15, e23=e23, e24=e24):
                regions = house_regions(field, graph)
                self.assertEqual(len(regions), 4)
                for region in regions:
                    for ineq in region.inequalities:
                        self.assertIs(ineq.side(region.witness),
                                      Side.INSIDE)

    def test_wiring_is_checked(self):
        graph, field = build_preset("bowtie")
        with self.assertRaises(WiringMismatch):
            house_regions(field, graph)


class ShadowingTests(SimpleTestCase):
    """Grid search for points following a walk."""

    def test_witness_found(self):
        graph, field = build_preset("kirk-silber")
        result = verify_shadowing(field, [3, 1, 2, 3],
                                  GridSpec(points=8), graph)
        self.assertTrue(result.found)
        self.assertEqual(result.status, "Witness")
        self.assertEqual(result.coords, (2, 4))

    def test_empty_on_grid(self):
        graph, field = build_preset("kirk-silber")
        result = verify_shadowing(field, [4, 1, 2, 3],
                                  GridSpec(points=8), graph)
        self.assertFalse(result.found)
        self.assertEqual(result.status, "EmptyOnGrid")
        self.assertEqual(result.checked, 64)


    def test_deep_domain_gets_a_deeper_grid(self):
        # q1 = 27/25 and q2 = 6/5 give x2^(1/18) < x4^(5/6) for 3 -> 1 -> 2 -> 4
        overrides = {
            (1, 3): Fraction(-5, 9), (1, 4): Fraction(-3, 5),
            (2, 3): Fraction(1), (2, 4): Fraction(6, 5),
        }
        graph, field = build_preset("kirk-silber", overrides=overrides)
        cfg = CommonConnectionConfig.from_field(field, 1, 2, 3, 4, 3, 4)
        self.assertEqual(cfg.incoming_ratio, Fraction(27, 25))
        self.assertEqual(classify_paths(cfg).status("alpha", "b"),
                         PathStatus.REALIZED)
        shallow = verify_shadowing(field, [3, 1, 2, 4], graph=graph,
                                   deepen=False)
        self.assertFalse(shallow.found)
        result = verify_shadowing(field, [3, 1, 2, 4], graph=graph)
        self.assertTrue(result.found)
        self.assertGreaterEqual(result.grid.decades, 60)
        x2, x4 = result.witness
        self.assertLess(math.log(x2) / 18, 5 * math.log(x4) / 6)

    def test_grid_depth_is_kept_for_shallow_domains(self):
        graph, field = build_preset("kirk-silber")
        grid = GridSpec(points=8)
        self.assertEqual(shadowing_grid(field, [4, 1, 2, 3], grid, graph),
                         grid)

    def test_agrees_with_the_path_verdicts(self):
        rng = random.Random(31)
        quarters = [Fraction(k, 4) for k in range(1, 8) if k != 4]
        nodes = {"alpha": 3, "a": 4, "beta": 3, "b": 4}
        for _ in range(50):
            c_alpha = Fraction(rng.randint(4, 12), 4)
            e_beta = Fraction(rng.randint(4, 12), 4)
            q1, q2 = rng.sample(quarters, 2)
            graph, field = build_preset("kirk-silber", overrides={
                (1, 3): -c_alpha, (1, 4): -q1 * c_alpha,
                (2, 3): e_beta, (2, 4): q2 * e_beta,
            })
            verdict = classify_paths(
                CommonConnectionConfig.from_field(field, 1, 2, 3, 4, 3, 4)
            )
            for incoming, outgoing in PATHS:
                walk = [nodes[incoming], 1, 2, nodes[outgoing]]
                with self.subTest(q1=q1, q2=q2, walk=walk):
                    result = verify_shadowing(field, walk, graph=graph)
                    realized = (verdict.status(incoming, outgoing)
                                is PathStatus.REALIZED)
                    self.assertEqual(result.found, realized)
