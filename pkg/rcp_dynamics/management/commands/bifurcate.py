from rcp_dynamics.bifurcation import SweepConfig, phase_portrait, run_sweep
from rcp_dynamics.constants import CLASSIFICATIONS
from rcp_dynamics.emitters import Emission, companion_path, write_csv
from rcp_dynamics.exceptions import DivergenceError
from rcp_dynamics.management.base import RcpCommand, numerical_failure
from rcp_dynamics.utils import parse_assignment, parse_range

# keyword of SweepConfig per command option
SWEEP_OPTIONS = {
    't_end': 't_end',
    'dt': 'dt',
    'transient': 'transient_fraction',
    'perturbation': 'perturbation',
}


def phase_path(out, a: float) -> str:
    return companion_path(out, f'.phase-{a:g}.csv')


class Command(RcpCommand):
    help = 'Sweeps the gain a and classifies the long-run behaviour of every sample.'

    def add_command_arguments(self, parser):
        self.add_model_arguments(parser, with_gain=False)
        parser.add_argument('--range', help='lo:hi:n of the gain a')
        parser.add_argument('--t-end', type=float)
        parser.add_argument('--dt', type=float)
        parser.add_argument('--transient', type=float, help='leading fraction of samples dropped')
        parser.add_argument('--perturbation', type=float)
        parser.add_argument('--phase', action='append', help="a=<value>; emits a phase portrait, repeatable")
        parser.add_argument('--out')

    def run(self, options: dict):
        self.require(options, 'range', 'out')
        lo, hi, steps = parse_range(options['range'])
        phase_gains = [parse_assignment(text) for text in options.get('phase') or []]
        spec = self.build_model_spec(options, a=lo)
        cfg = SweepConfig(spec, lo, hi, steps, **{
            keyword: options[name] for name, keyword in SWEEP_OPTIONS.items() if options.get(name) is not None
        })

        points = run_sweep(cfg)
        portraits, failures = [], []
        for a in phase_gains:
            try:
                portraits.append(phase_portrait(spec, a, cfg))
            except DivergenceError as error:
                failures.append(f'phase portrait at a={a:g} diverged at t={error.time}')

        out = options['out']
        manifest = self.manifest(options)
        all_diverged = all(point.classified == CLASSIFICATIONS.DIVERGED for point in points)
        if all_diverged or failures:
            manifest.status = 'diverged'
        emission = Emission(manifest, out)
        emission.add(lambda: write_csv(
            out, ['a', 'class', 'cycle_min', 'cycle_max', 'amplitude', 'period'],
            [(p.param_value, p.classified, p.cycle_min, p.cycle_max, p.amplitude, p.period_estimate)
             for p in points],
        ))
        for portrait in portraits:
            emission.add(lambda portrait=portrait: write_csv(
                phase_path(out, portrait.param_value), ['x', 'y'], portrait.pairs.tolist(),
            ))
        emission.execute()

        if all_diverged:
            raise numerical_failure(f'every sample in a=[{lo}, {hi}] diverged')
        if failures:
            raise numerical_failure('; '.join(failures))
