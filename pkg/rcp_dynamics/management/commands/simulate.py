from rcp_dynamics.constants import OUTPUT_FORMATS
from rcp_dynamics.emitters import Emission, write_csv, write_json
from rcp_dynamics.engine import integrate
from rcp_dynamics.exceptions import DivergenceError
from rcp_dynamics.fluid import build_problem
from rcp_dynamics.logger import logger
from rcp_dynamics.management.base import RcpCommand, numerical_failure


def trajectory_table(spec, traj) -> tuple[list[str], list[tuple]]:
    if spec.is_model_a:
        return ['t', 'rate', 'queue'], list(zip(traj.times.tolist(), traj.rate.tolist(), traj.queue.tolist()))
    return ['t', 'rate', 'rate_delayed'], list(zip(traj.times.tolist(), traj.rate.tolist(),
                                                   traj.delayed(0).tolist()))


class Command(RcpCommand):
    help = 'Integrates one fluid model from a perturbed equilibrium and writes the trajectory.'
    defaults = {'perturbation': 0.01, 'format': OUTPUT_FORMATS.csv}

    def add_command_arguments(self, parser):
        self.add_model_arguments(parser)
        parser.add_argument('--t-end', type=float)
        parser.add_argument('--dt', type=float)
        parser.add_argument('--perturbation', type=float, help='relative offset of the initial rate (default 0.01)')
        parser.add_argument('--out')
        parser.add_argument('--format', choices=[value for value, _ in OUTPUT_FORMATS])

    def run(self, options: dict):
        self.require(options, 'a', 't_end', 'out')
        spec = self.build_model_spec(options)
        problem = build_problem(spec, options['t_end'], options.get('dt'), options['perturbation'])
        manifest = self.manifest(options)

        failure = None
        try:
            traj = integrate(problem)
        except DivergenceError as error:
            failure = error
            traj = error.trajectory
            manifest.status = 'diverged'
            manifest.failure_time = error.time

        header, rows = trajectory_table(spec, traj)
        out = options['out']
        emission = Emission(manifest, out)
        if options['format'] == OUTPUT_FORMATS.json:
            emission.add(lambda: write_json(out, [dict(zip(header, row)) for row in rows]))
        else:
            emission.add(lambda: write_csv(out, header, rows))
        emission.execute()

        if failure is not None:
            raise numerical_failure(f'simulation diverged at t={failure.time}; partial trajectory in {out}')
        logger.info(f'simulate {spec.variant} a={spec.params.a}: {len(traj)} samples to {out}')
