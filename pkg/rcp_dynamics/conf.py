import os

from django.conf import settings

from rcp_dynamics.exceptions import ConfigurationError

DEFAULTS = {
    'THREADS': 1,
    'LIMIT_CYCLE_THRESHOLD': 1e-3,
    'DIVERGENCE_FACTOR': 1e12,
    'DEFAULT_DELAY_STEPS': 100,
    'MAX_DELAY_STEPS': 1_000_000,
    'SWEEP_DELAY_STEPS': 200,
    'SWEEP_HORIZON_RTTS': 400,
    'SWEEP_TRANSIENT': 0.5,
    'SWEEP_PERTURBATION': 0.01,
    'ROOT_CELL': 0.05,
}

THREADS_ENV = 'RCPDYN_THREADS'


def get_setting(name: str):
    """
    Reads a value from the `RCP_DYNAMICS` settings dict.
    Falls back to the package default when Django is not configured,
    so the numerical modules stay usable as a plain library.
    """
    overrides = getattr(settings, 'RCP_DYNAMICS', {}) if settings.configured else {}
    return overrides.get(name, DEFAULTS[name])


def get_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise ConfigurationError(f'{THREADS_ENV} must be an integer, got {value!r}')
    return max(1, int(get_setting('THREADS')))
