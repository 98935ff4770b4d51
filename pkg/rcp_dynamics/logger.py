import logging
from enum import Enum

# The main logger for all activity of rcp-dynamics.
logger: logging.Logger = logging.getLogger('rcp-dynamics')
# A special logger for the structured event log of parameter sweeps.
sweep_logger: logging.Logger = logging.getLogger('rcp-dynamics.sweep')

LEVELS_BY_VERBOSITY = {
    0: logging.ERROR,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


class SweepEventType(Enum):
    START = 'Start'
    POINT = 'Point'
    CLASSIFY = 'Classify'
    DIVERGE = 'Diverge'
    REFINE = 'Refine'
    ONSET = 'Onset'
    COMPLETE = 'Complete'


def set_verbosity(verbosity: int) -> None:
    """Maps Django's --verbosity flag onto the package loggers."""
    level = LEVELS_BY_VERBOSITY.get(verbosity, logging.DEBUG)
    logger.setLevel(level)
    sweep_logger.setLevel(level)
