from rcp_dynamics.analysis import boundary_polyline, stability_chart
from rcp_dynamics.constants import CHART_MODELS
from rcp_dynamics.emitters import Emission, companion_path, write_csv
from rcp_dynamics.management.base import RcpCommand
from rcp_dynamics.utils import parse_range

BOUNDARY_SUFFIX = '.boundary.csv'


class Command(RcpCommand):
    help = 'Evaluates the analytic stability verdict over a grid of the (a, beta) or (a, b) plane.'

    def add_command_arguments(self, parser):
        parser.add_argument('--model', choices=[value for value, _ in CHART_MODELS])
        parser.add_argument('--a-range', help='lo:hi:n')
        parser.add_argument('--second-range', help='lo:hi:n of beta (model a) or b (model b)')
        parser.add_argument('--out')

    def run(self, options: dict):
        self.require(options, 'model', 'a_range', 'second_range', 'out')
        a_lo, a_hi, a_n = parse_range(options['a_range'])
        s_lo, s_hi, s_n = parse_range(options['second_range'])
        chart = stability_chart(options['model'], (a_lo, a_hi), (s_lo, s_hi), (a_n, s_n))

        out = options['out']
        emission = Emission(self.manifest(options), out)
        emission.add(lambda: write_csv(
            out, ['a', chart.second_name, 'stable', 'margin'],
            [(a, second, verdict.stable, verdict.margin) for a, second, verdict in chart.cells()],
        ))
        emission.add(lambda: write_csv(
            companion_path(out, BOUNDARY_SUFFIX), ['a', chart.second_name], boundary_polyline(chart),
        ))
        emission.execute()
