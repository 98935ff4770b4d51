import json

from rcp_dynamics.constants import CHAR_EQ_KINDS
from rcp_dynamics.emitters import Emission, write_json
from rcp_dynamics.management.base import RcpCommand, usage_error
from rcp_dynamics.specroots import CharEq, SearchBox, rightmost_roots

# coefficients each equation takes
EQUATION_FLAGS = {
    CHAR_EQ_KINDS.MODEL_A_FULL: ('a', 'beta'),
    CHAR_EQ_KINDS.MODEL_A_NOQUEUE: ('a',),
    CHAR_EQ_KINDS.SCALAR_DELAY: ('kappa_tau',),
}
BOX_FLAGS = ('re_min', 're_max', 'im_max')


class Command(RcpCommand):
    help = 'Prints the rightmost roots of a characteristic equation as a JSON list.'
    defaults = {'count': 1}

    def add_command_arguments(self, parser):
        parser.add_argument('--eq', choices=[value for value, _ in CHAR_EQ_KINDS])
        parser.add_argument('--a', type=float)
        parser.add_argument('--beta', type=float)
        parser.add_argument('--kappa-tau', type=float)
        parser.add_argument('--count', type=int)
        parser.add_argument('--re-min', type=float)
        parser.add_argument('--re-max', type=float)
        parser.add_argument('--im-max', type=float)
        parser.add_argument('--out', help='also write the list and a manifest to this path')

    def run(self, options: dict):
        self.require(options, 'eq')
        kind = options['eq']
        if kind not in EQUATION_FLAGS:
            raise usage_error(f'unknown equation {kind!r}')
        expected = EQUATION_FLAGS[kind]
        self.require(options, *expected)
        for name in ('a', 'beta', 'kappa_tau'):
            if name not in expected and options.get(name) is not None:
                raise usage_error(f"--{name.replace('_', '-')} is not valid for --eq {kind}")

        eq = CharEq(kind, **{name: options[name] for name in expected})
        box = SearchBox(**{name: options[name] for name in BOX_FLAGS if options.get(name) is not None})
        records = rightmost_roots(eq, count=options['count'], box=box).as_records()

        out = options.get('out')
        if out:
            emission = Emission(self.manifest(options), out)
            emission.add(lambda: write_json(out, records))
            emission.execute()
        return json.dumps(records, indent=2)
