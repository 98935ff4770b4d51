__version__ = '0.1.0'

from .analysis import StabilityVerdict, stability_chart, stability_model_a, stability_model_b
from .bifurcation import SweepConfig, onset_of_cycle, phase_portrait, run_sweep
from .engine import DdeProblem, integrate
from .fluid import ModelSpec, build_problem
from .params import Equilibrium, ModelAParams, ModelBParams, map_beta_to_b
from .specroots import CharEq, SearchBox, rightmost_roots
from .trajectory import Trajectory, steady_window
