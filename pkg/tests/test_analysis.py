import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from rcp_dynamics.analysis import (
    StabilityChart, boundary_polyline, convergence_rate, crossing_delay_ratio, crossing_frequency_model_a,
    hopf_transversality, model_a_band, model_a_tip, optimal_a_no_queue, oracle_critical_a, stability_chart,
    stability_model_a, stability_model_b,
)
from rcp_dynamics.constants import CHART_MODELS
from rcp_dynamics.exceptions import DomainError, ParameterError, PreconditionError
from rcp_dynamics.params import model_b_xi
from rcp_dynamics.specroots import CharEq, SearchBox, rightmost_real_part

HALF_PI = math.pi / 2
# small boxes keep the oracle loops fast; the rightmost roots lie well inside
MODEL_A_BOX = SearchBox(re_min=-3, re_max=3, im_max=12)
SCALAR_BOX = SearchBox(re_min=-5, re_max=2, im_max=15)


class ModelANoQueueTestCase(SimpleTestCase):
    def test_boundary(self):
        self.assertTrue(stability_model_a(1.0, 0).stable)
        self.assertFalse(stability_model_a(1.6, 0).stable)

    def test_verdict(self):
        verdict = stability_model_a(1.0, 0)
        self.assertEqual(verdict.critical_a, HALF_PI)
        self.assertAlmostEqual(verdict.margin, HALF_PI - 1)
        self.assertEqual(verdict.omega_cross, HALF_PI)

    def test_domain(self):
        with self.assertRaises(DomainError):
            stability_model_a(0, 0.3)
        with self.assertRaises(DomainError):
            stability_model_a(1, -0.3)
        with self.assertRaises(ParameterError):
            stability_model_a(-1, 0.3)

    def test_oracle_sign_change_at_half_pi(self):
        critical = oracle_critical_a(CHART_MODELS.A, 0.0)
        self.assertAlmostEqual(critical, HALF_PI, delta=1e-4)


class ModelAQueueTestCase(SimpleTestCase):
    def test_outside_provably_stable_region(self):
        self.assertFalse(stability_model_a(0.5, 1).stable)

    def test_critical_gain(self):
        verdict = stability_model_a(1.0, 0.3)
        self.assertTrue(verdict.stable)
        self.assertAlmostEqual(verdict.critical_a, 1.407, delta=5e-3)
        self.assertAlmostEqual(verdict.margin, min(1.0 - verdict.lower_critical_a, verdict.critical_a - 1.0))

    def test_small_gain_is_unstable_with_queue_feedback(self):
        lower, upper = model_a_band(0.3)
        self.assertGreater(lower, 0)
        self.assertFalse(stability_model_a(0.5 * lower, 0.3).stable)
        self.assertFalse(stability_model_a(upper + 0.01, 0.3).stable)
        self.assertTrue(stability_model_a(0.5 * (lower + upper), 0.3).stable)

    def test_band_narrows_towards_tip(self):
        widths = [np.subtract(*model_a_band(beta)[::-1]) for beta in (0.05, 0.2, 0.4, 0.5)]
        self.assertEqual(widths, sorted(widths, reverse=True))

    def test_no_band_above_tip(self):
        a_tip, beta_tip = model_a_tip()
        self.assertAlmostEqual(beta_tip, 0.5497, delta=1e-3)
        self.assertIsNone(model_a_band(beta_tip + 1e-6))
        verdict = stability_model_a(a_tip, 1.0)
        self.assertFalse(verdict.stable)
        self.assertLess(verdict.margin, 0)
        self.assertAlmostEqual(verdict.critical_a, a_tip)

    def test_crossing_frequency_identity(self):
        for beta in (0.1, 0.3, 0.5):
            critical = stability_model_a(0.5 * sum(model_a_band(beta)), beta).critical_a
            omega = crossing_frequency_model_a(critical, beta)
            self.assertAlmostEqual(omega * math.sin(omega), critical, delta=1e-9)
            self.assertAlmostEqual(omega * omega * math.cos(omega), beta, delta=1e-9)
            self.assertAlmostEqual(crossing_delay_ratio(critical, beta), 1, delta=1e-9)

    def test_matches_oracle(self):
        for beta in (0.1, 0.3):
            analytic = stability_model_a(1.0, beta).critical_a
            self.assertAlmostEqual(oracle_critical_a(CHART_MODELS.A, beta, MODEL_A_BOX), analytic, delta=1e-3)

    def test_oracle_agrees_nothing_is_stable_for_large_beta(self):
        for beta in (1, 3):
            with self.assertRaises(PreconditionError):
                oracle_critical_a(CHART_MODELS.A, beta, MODEL_A_BOX)
            for a in np.linspace(0.1, 3, 8):
                self.assertFalse(stability_model_a(float(a), beta).stable)
                self.assertGreater(rightmost_real_part(CharEq.for_model_a(float(a), beta), MODEL_A_BOX), 0)

    def test_rightmost_root_at_half_and_one(self):
        self.assertGreater(rightmost_real_part(CharEq.for_model_a(0.5, 1)), 0)

    @settings(max_examples=20, deadline=None)
    @given(beta=st.floats(min_value=0.02, max_value=0.52))
    def test_boundary_consistency(self, beta):
        analytic = stability_model_a(0.5 * sum(model_a_band(beta)), beta).critical_a
        self.assertAlmostEqual(oracle_critical_a(CHART_MODELS.A, beta, MODEL_A_BOX), analytic, delta=1e-3)


class ModelBTestCase(SimpleTestCase):
    def test_critical_gains(self):
        self.assertAlmostEqual(stability_model_b(1, 0.02).critical_a, 0.8246, delta=1e-4)
        self.assertAlmostEqual(stability_model_b(1, 0.18).critical_a, 0.9019, delta=1e-4)

    def test_discontinuity_at_zero(self):
        self.assertEqual(stability_model_b(1.0, 0).critical_a, HALF_PI)
        self.assertTrue(stability_model_b(1.0, 0).stable)
        self.assertFalse(stability_model_b(1.6, 0).stable)
        verdict = stability_model_b(0.7, 1e-9)
        self.assertAlmostEqual(verdict.critical_a, math.pi / 4, delta=1e-4)
        self.assertFalse(verdict.stable)

    def test_large_b_limit(self):
        self.assertAlmostEqual(stability_model_b(1, 1e6).critical_a, HALF_PI, delta=1e-3)
        self.assertLessEqual(model_b_xi(1e6) - 1, 1e-3)

    def test_boundary_is_exact(self):
        for b in (0.02, 0.18, 1, 10):
            self.assertAlmostEqual(stability_model_b(1, b).critical_a * model_b_xi(b), HALF_PI, places=14)

    def test_matches_oracle(self):
        for b in (0.02, 0.18, 1, 10):
            analytic = stability_model_b(1, b).critical_a
            self.assertAlmostEqual(oracle_critical_a(CHART_MODELS.B, b, SCALAR_BOX), analytic, delta=1e-3)

    def test_domain(self):
        with self.assertRaises(DomainError):
            stability_model_b(0, 0.1)
        with self.assertRaises(DomainError):
            stability_model_b(1, -0.1)


class HopfTestCase(SimpleTestCase):
    def test_with_queue(self):
        critical = stability_model_b(1, 0.02).critical_a
        self.assertEqual(hopf_transversality(critical, 0.02, tau=1.0), 1)

    def test_without_queue(self):
        self.assertEqual(hopf_transversality(HALF_PI, 0, tau=0.1), 1)

    def test_off_boundary(self):
        with self.assertRaises(PreconditionError):
            hopf_transversality(1.0, 0.02, tau=1.0)

    @settings(max_examples=20, deadline=None)
    @given(b=st.floats(min_value=0, max_value=1e4), tau=st.floats(min_value=1e-3, max_value=1e3))
    def test_positive_along_boundary(self, b, tau):
        critical = stability_model_b(1, b).critical_a
        self.assertEqual(hopf_transversality(critical, b, tau), 1)

    def test_roots_cross_with_positive_speed(self):
        xi = model_b_xi(0.02)
        critical = stability_model_b(1, 0.02).critical_a
        below = rightmost_real_part(CharEq.scalar_delay((critical - 1e-3) * xi), SCALAR_BOX)
        above = rightmost_real_part(CharEq.scalar_delay((critical + 1e-3) * xi), SCALAR_BOX)
        self.assertLess(below, 0)
        self.assertGreater(above, 0)


class OptimalGainTestCase(SimpleTestCase):
    def test_independent_of_delay(self):
        for tau in (0.01, 1, 250):
            self.assertAlmostEqual(optimal_a_no_queue(tau), 0.367879441, places=9)

    def test_domain(self):
        with self.assertRaises(DomainError):
            optimal_a_no_queue(0)

    def test_grid_argmin(self):
        gains = np.linspace(0.05, 1.5, 291)
        real_parts = [rightmost_real_part(CharEq.scalar_delay(float(a)), SCALAR_BOX) for a in gains]
        self.assertAlmostEqual(gains[int(np.argmin(real_parts))], 1 / math.e, delta=0.01)

    def test_convergence_rate(self):
        self.assertAlmostEqual(convergence_rate(1 / math.e, tau=2.0, box=SCALAR_BOX), 0.5, delta=1e-6)
        self.assertLess(convergence_rate(1.0, tau=2.0, box=SCALAR_BOX), 0.5)


class StabilityChartTestCase(SimpleTestCase):
    def test_model_a_cell(self):
        chart = stability_chart(CHART_MODELS.A, (0.25, 2.0), (0.0, 2.0), (8, 5))
        cells = {(round(a, 9), round(second, 9)): verdict for a, second, verdict in chart.cells()}
        self.assertFalse(cells[(0.5, 1.0)].stable)
        self.assertTrue(cells[(1.0, 0.0)].stable)
        self.assertEqual(chart.second_name, 'beta')

    def test_model_b_small_gains_are_stable(self):
        chart = stability_chart(CHART_MODELS.B, (0.05, 1.5), (0.0, 10.0), (30, 21))
        self.assertEqual(chart.second_name, 'b')
        for a, b, verdict in chart.cells():
            if a < math.pi / 4 and b > 0:
                self.assertTrue(verdict.stable)
            self.assertEqual(verdict.stable, verdict.margin > 0)

    def test_model_b_critical_gain_increases_with_b(self):
        criticals = [stability_model_b(1, b).critical_a for b in np.linspace(0.01, 10, 50)]
        self.assertEqual(criticals, sorted(criticals))
        self.assertLess(criticals[-1], HALF_PI)

    def test_row_major_layout(self):
        chart = stability_chart(CHART_MODELS.B, (0.1, 1.0), (0.0, 1.0), (4, 3))
        self.assertEqual(chart.margins().shape, (3, 4))
        a, second, _ = list(chart.cells())[1]
        self.assertAlmostEqual(a, 0.4)
        self.assertEqual(second, 0)

    def test_workers_give_the_same_chart(self):
        serial = stability_chart(CHART_MODELS.A, (0.1, 2.0), (0.0, 0.6), (20, 7), workers=1)
        threaded = stability_chart(CHART_MODELS.A, (0.1, 2.0), (0.0, 0.6), (20, 7), workers=3)
        np.testing.assert_array_equal(serial.margins(), threaded.margins())

    def test_invalid_bounds(self):
        with self.assertRaises(ParameterError):
            stability_chart(CHART_MODELS.B, (0.0, 1.0), (0.0, 1.0), (4, 3))
        with self.assertRaises(ParameterError):
            stability_chart(CHART_MODELS.B, (0.1, 1.0), (0.0, 1.0), (1, 3))
        with self.assertRaises(ParameterError):
            stability_chart('c', (0.1, 1.0), (0.0, 1.0), (4, 3))


class BoundaryPolylineTestCase(SimpleTestCase):
    def test_model_b_boundary_is_exact(self):
        chart = stability_chart(CHART_MODELS.B, (0.1, 2.0), (0.1, 10.0), (40, 12))
        polyline = boundary_polyline(chart)
        self.assertEqual(len(polyline), 12)
        for a, b in polyline:
            self.assertAlmostEqual(a, stability_model_b(1, b).critical_a, places=9)

    def test_model_a_band_is_one_curve(self):
        chart = stability_chart(CHART_MODELS.A, (0.05, 2.0), (0.1, 0.5), (200, 10))
        polyline = boundary_polyline(chart)
        self.assertEqual(len(polyline), 20)
        lower, upper = model_a_band(0.1)
        self.assertAlmostEqual(polyline[0][0], lower, delta=0.01)
        self.assertAlmostEqual(polyline[-1][0], upper, delta=0.01)

    def test_no_crossing(self):
        chart = StabilityChart(model=CHART_MODELS.B, a_values=np.array([0.1, 0.2]),
                               second_values=np.array([1.0, 2.0]),
                               verdicts=((stability_model_b(0.1, 1.0), stability_model_b(0.2, 1.0)),
                                         (stability_model_b(0.1, 2.0), stability_model_b(0.2, 2.0))))
        self.assertEqual(boundary_polyline(chart), [])
