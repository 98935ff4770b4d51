"""
Entry point of the ``rcpdyn`` script and ``python -m rcp_dynamics``.
Runs the management commands with a minimal settings object unless a Django
project is already configured.
"""
import os
import sys

from django.conf import settings

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(asctime)s %(name)s %(levelname)s %(message)s'},
    },
    'handlers': {
        'stderr': {'class': 'logging.StreamHandler', 'formatter': 'plain', 'stream': 'ext://sys.stderr'},
    },
    'loggers': {
        'rcp-dynamics': {'handlers': ['stderr'], 'level': 'WARNING'},
    },
}


def configure() -> None:
    if settings.configured or os.environ.get('DJANGO_SETTINGS_MODULE'):
        return
    settings.configure(INSTALLED_APPS=['rcp_dynamics'], USE_TZ=True, LOGGING=LOGGING)


def main(argv=None) -> None:
    configure()
    from django.core.management import execute_from_command_line
    execute_from_command_line(['rcpdyn'] + list(sys.argv[1:] if argv is None else argv))


if __name__ == '__main__':
    main()
