from django.core.management.base import BaseCommand, CommandError

from rcp_dynamics import __version__
from rcp_dynamics.constants import MODEL_A_VARIANTS, VARIANTS
from rcp_dynamics.emitters import RunManifest
from rcp_dynamics.exceptions import ConfigurationError, ParameterError
from rcp_dynamics.fluid import ModelSpec
from rcp_dynamics.logger import set_verbosity
from rcp_dynamics.params import ModelAParams, ModelBParams
from rcp_dynamics.utils import load_config, merge_options

USAGE_ERROR = 2
NUMERICAL_FAILURE = 3

# model flags accepted per variant, beyond --a, --capacity and --rtt
MODEL_FLAGS = {
    VARIANTS.A_NONSWITCHED: {'beta', 'flows'},
    VARIANTS.A_SWITCHED: {'beta', 'flows'},
    VARIANTS.B_QUEUE: {'b', 'sigma'},
    VARIANTS.B_NOQUEUE: {'gamma', 'sigma'},
}
OPTIONAL_MODEL_FLAGS = ('beta', 'b', 'gamma', 'sigma', 'flows')
# Django's own options, never part of a run configuration
DJANGO_OPTIONS = {
    'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks', 'stdout', 'stderr',
}


def usage_error(message: str) -> CommandError:
    return CommandError(message, returncode=USAGE_ERROR)


def numerical_failure(message: str) -> CommandError:
    return CommandError(message, returncode=NUMERICAL_FAILURE)


def option_or(options: dict, name: str, default):
    # an explicit zero is a value, not a missing flag
    value = options.get(name)
    return default if value is None else value


class RcpCommand(BaseCommand):
    """
    Base for the rcp-dynamics commands.
    All flags default to None so that values from ``--config`` can be told apart
    from explicit flags; ``defaults`` fills whatever is still missing.
    """
    defaults: dict = {}

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON file mirroring the command flags; flags override it')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        raise NotImplementedError

    def add_model_arguments(self, parser, with_gain: bool = True):
        parser.add_argument('--model', choices=[value for value, _ in VARIANTS])
        if with_gain:
            parser.add_argument('--a', type=float)
        parser.add_argument('--beta', type=float)
        parser.add_argument('--b', type=float)
        parser.add_argument('--gamma', type=float)
        parser.add_argument('--sigma', type=float)
        parser.add_argument('--capacity', type=float)
        parser.add_argument('--rtt', type=float)
        parser.add_argument('--flows', type=int)

    def execute(self, *args, **options):
        set_verbosity(options.get('verbosity', 1))
        return super().execute(*args, **options)

    def handle(self, *args, **options):
        config_path = options.pop('config', None)
        explicit = {key: value for key, value in options.items() if key not in DJANGO_OPTIONS}
        try:
            config = load_config(config_path) if config_path else {}
            resolved = merge_options(explicit, config, self.defaults)
            return self.run(resolved)
        except (ParameterError, ConfigurationError) as error:
            raise usage_error(str(error))

    def run(self, options: dict):
        raise NotImplementedError

    def require(self, options: dict, *names: str) -> None:
        missing = [name for name in names if options.get(name) is None]
        if missing:
            flags = ', '.join(f"--{name.replace('_', '-')}" for name in missing)
            raise usage_error(f'{self.command_name} requires {flags}')

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    def manifest(self, options: dict) -> RunManifest:
        return RunManifest(command=self.command_name, config=dict(sorted(options.items())), tool_version=__version__)

    def build_model_spec(self, options: dict, a: float | None = None) -> ModelSpec:
        """
        Builds the model from the flags, rejecting flags of another variant.
        """
        self.require(options, 'model', 'capacity', 'rtt')
        variant = options['model']
        if variant not in MODEL_FLAGS:
            raise usage_error(f'unknown model {variant!r}')
        allowed = MODEL_FLAGS[variant]
        for name in OPTIONAL_MODEL_FLAGS:
            if options.get(name) is not None and name not in allowed:
                raise usage_error(f'--{name} is not valid for --model {variant}')

        a = options.get('a') if a is None else a
        if variant in MODEL_A_VARIANTS:
            params = ModelAParams(
                a=a, beta=option_or(options, 'beta', 0.0), capacity=options['capacity'], rtt=options['rtt'],
                flows=option_or(options, 'flows', 1), switched=variant == VARIANTS.A_SWITCHED,
            )
        elif variant == VARIANTS.B_QUEUE:
            self.require(options, 'b')
            params = ModelBParams(a=a, b=options['b'], capacity=options['capacity'], rtt=options['rtt'],
                                  sigma=option_or(options, 'sigma', 1.0))
        else:
            params = ModelBParams(a=a, b=0.0, capacity=options['capacity'], rtt=options['rtt'],
                                  sigma=option_or(options, 'sigma', 1.0), gamma=option_or(options, 'gamma', 1.0))
        return ModelSpec(variant, params)
