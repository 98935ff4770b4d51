import logging

from django.test import SimpleTestCase

from rcp_dynamics.bifurcation import SweepConfig, onset_of_cycle, reference_model_b, run_sweep
from rcp_dynamics.logger import SweepEventType, logger, set_verbosity, sweep_logger
from tests.utils import get_sweep_logs


def small_config(model, lo, hi, steps, **kwargs):
    return SweepConfig(model, lo, hi, steps, t_end=40 * model.rtt, dt=model.rtt / 20, **kwargs)


class SweepLoggingTestCase(SimpleTestCase):

    def setUp(self) -> None:
        set_verbosity(3)
        self.logs = get_sweep_logs()
        self.logs.clear()

    def tearDown(self) -> None:
        set_verbosity(1)

    def test_sweep_events_share_one_id(self):
        run_sweep(small_config(reference_model_b(gamma=0.9), 1.0, 2.0, 3))

        start = self.logs.events(SweepEventType.START.value)
        self.assertEqual(len(start), 1)
        self.assertIn('b-noqueue', start[0]['message'])
        self.assertEqual(len(self.logs.events(SweepEventType.POINT.value)), 3)
        self.assertEqual(len(self.logs.events(SweepEventType.CLASSIFY.value)), 3)
        self.assertEqual(len(self.logs.events(SweepEventType.COMPLETE.value)), 1)

        ids = {log['message'].split(' ')[0] for log in self.logs.get_logs()}
        self.assertEqual(len(ids), 1)

    def test_complete_is_last(self):
        run_sweep(small_config(reference_model_b(gamma=0.9), 1.0, 2.0, 2))
        messages = [log['message'] for log in self.logs.get_logs()]
        self.assertIn(SweepEventType.START.value, messages[0])
        self.assertTrue(messages[-1].endswith(SweepEventType.COMPLETE.value))

    def test_divergence_is_a_warning(self):
        run_sweep(small_config(reference_model_b(b=0.02), 0.5, 1.0, 2, perturbation=0.2))

        diverged = self.logs.events(SweepEventType.DIVERGE.value)
        self.assertEqual(len(diverged), 2)
        for log in diverged:
            self.assertEqual(log['level'], 'WARNING')
            self.assertIn('t=0', log['message'])
        self.assertEqual(self.logs.events(SweepEventType.CLASSIFY.value), [])

    def test_onset_refinement(self):
        model = reference_model_b(gamma=0.9)
        cfg = SweepConfig(model, 1.0, 2.0, 3, t_end=200 * model.rtt, dt=model.rtt / 20)
        onset = onset_of_cycle(cfg)

        self.assertGreater(len(self.logs.events(SweepEventType.REFINE.value)), 0)
        found = self.logs.events(SweepEventType.ONSET.value)
        self.assertEqual(len(found), 1)
        self.assertIn(f'a={onset}', found[0]['message'])

    def test_quiet_verbosity_drops_info(self):
        set_verbosity(0)
        run_sweep(small_config(reference_model_b(gamma=0.9), 1.0, 2.0, 2))
        self.assertEqual(self.logs.get_logs(), [])


class VerbosityTestCase(SimpleTestCase):

    def tearDown(self) -> None:
        set_verbosity(1)

    def test_levels(self):
        for verbosity, level in ((0, logging.ERROR), (1, logging.WARNING), (2, logging.INFO), (3, logging.DEBUG)):
            set_verbosity(verbosity)
            self.assertEqual(logger.level, level)
            self.assertEqual(sweep_logger.level, level)

    def test_unknown_verbosity_is_debug(self):
        set_verbosity(7)
        self.assertEqual(logger.level, logging.DEBUG)
