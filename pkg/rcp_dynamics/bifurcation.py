"""
Gain sweeps of the fluid models: bifurcation diagrams, phase portraits and the
simulated onset of oscillation.

Every sample starts from a constant history at (1 + perturbation) times the
equilibrium rate with an empty queue, drops the transient and measures the
rate extrema over the remaining window.
"""
import math
import uuid
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.signal import find_peaks

from rcp_dynamics.conf import get_setting, get_threads
from rcp_dynamics.constants import CLASSIFICATIONS, VARIANTS
from rcp_dynamics.engine import integrate
from rcp_dynamics.exceptions import DivergenceError, ParameterError, PreconditionError
from rcp_dynamics.fluid import ModelSpec, build_problem
from rcp_dynamics.logger import SweepEventType, sweep_logger
from rcp_dynamics.params import ModelAParams, ModelBParams
from rcp_dynamics.trajectory import Trajectory, steady_window

ONSET_TOLERANCE = 1e-3


@dataclass(frozen=True)
class SweepConfig:
    """
    :param model: template whose gain ``a`` is replaced at every sample
    :param lo, hi, steps: inclusive linear grid of gains
    :param t_end: horizon, SWEEP_HORIZON_RTTS round trips by default
    :param dt: step, RTT / SWEEP_DELAY_STEPS by default
    """
    model: ModelSpec
    lo: float
    hi: float
    steps: int
    param: str = 'a'
    t_end: float | None = None
    dt: float | None = None
    transient_fraction: float = field(default_factory=lambda: get_setting('SWEEP_TRANSIENT'))
    perturbation: float = field(default_factory=lambda: get_setting('SWEEP_PERTURBATION'))
    threshold: float = field(default_factory=lambda: get_setting('LIMIT_CYCLE_THRESHOLD'))

    def __post_init__(self):
        if self.param != 'a':
            raise ParameterError(f'only the gain a can be swept, got {self.param!r}')
        if not self.lo < self.hi:
            raise ParameterError(f'sweep range must satisfy lo < hi, got {self.lo}, {self.hi}')
        if self.steps < 2:
            raise ParameterError(f'sweep needs at least 2 steps, got {self.steps}')
        if not 0 < self.perturbation < 1:
            raise ParameterError(f'perturbation must lie in (0, 1), got {self.perturbation}')
        if not 0 <= self.transient_fraction < 1:
            raise ParameterError(f'transient_fraction must lie in [0, 1), got {self.transient_fraction}')
        rtt = self.model.rtt
        if self.t_end is None:
            object.__setattr__(self, 't_end', get_setting('SWEEP_HORIZON_RTTS') * rtt)
        if self.dt is None:
            object.__setattr__(self, 'dt', rtt / get_setting('SWEEP_DELAY_STEPS'))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class BifurcationPoint:
    param_value: float
    equilibrium_rate: float
    cycle_min: float
    cycle_max: float
    amplitude: float
    classified: str
    period_estimate: float | None = None
    failure_time: float | None = None


@dataclass(frozen=True, eq=False)
class PhasePortrait:
    """(R(t), q(t)) for Model A, (R(t), R(t - RTT)) for Model B over the steady window."""
    pairs: np.ndarray
    param_value: float

    def bounding_box_diagonal(self) -> float:
        extent = self.pairs.max(axis=0) - self.pairs.min(axis=0)
        return float(np.hypot(*extent))


def estimate_period(window: Trajectory) -> float | None:
    """
    Mean spacing of successive rate maxima, each refined by a parabola through
    the discrete peak and its neighbours. None with fewer than two maxima.
    """
    rate = window.rate
    prominence = 0.5 * (rate.max() - rate.min())
    if prominence <= 0:
        return None
    peaks, _ = find_peaks(rate, prominence=prominence)
    if len(peaks) < 2:
        return None
    left, centre, right = rate[peaks - 1], rate[peaks], rate[peaks + 1]
    curvature = left - 2 * centre + right
    offset = np.where(curvature != 0, 0.5 * (left - right) / np.where(curvature != 0, curvature, 1), 0.0)
    times = (peaks + offset) * window.dt
    return float(np.mean(np.diff(times)))


def _simulate(spec: ModelSpec, cfg: SweepConfig) -> Trajectory:
    return integrate(build_problem(spec, cfg.t_end, cfg.dt, cfg.perturbation))


def run_point(cfg: SweepConfig, a: float) -> BifurcationPoint:
    spec = cfg.model.with_gain(a)
    rate_star = spec.equilibrium().rate_star
    try:
        traj = _simulate(spec, cfg)
    except DivergenceError as error:
        return BifurcationPoint(
            param_value=a, equilibrium_rate=rate_star, cycle_min=math.nan, cycle_max=math.nan,
            amplitude=math.nan, classified=CLASSIFICATIONS.DIVERGED, failure_time=error.time,
        )

    window = steady_window(traj, cfg.transient_fraction)
    cycle_min, cycle_max = float(window.rate.min()), float(window.rate.max())
    amplitude = cycle_max - cycle_min
    if amplitude < cfg.threshold * rate_star:
        return BifurcationPoint(
            param_value=a, equilibrium_rate=rate_star, cycle_min=cycle_min, cycle_max=cycle_max,
            amplitude=amplitude, classified=CLASSIFICATIONS.CONVERGED,
        )
    return BifurcationPoint(
        param_value=a, equilibrium_rate=rate_star, cycle_min=cycle_min, cycle_max=cycle_max,
        amplitude=amplitude, classified=CLASSIFICATIONS.LIMIT_CYCLE, period_estimate=estimate_period(window),
    )


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list[BifurcationPoint]:
    """Samples are independent; results keep the order of ``cfg.values``."""
    sweep_id = uuid.uuid4()
    values = [float(a) for a in cfg.values]
    workers = workers or get_threads()
    sweep_logger.info(
        f'{sweep_id} {SweepEventType.START.value} {cfg.model.variant} '
        f'a=[{cfg.lo}, {cfg.hi}] steps={cfg.steps} workers={workers}'
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(run_point, [cfg] * len(values), values))
    else:
        points = [run_point(cfg, a) for a in values]

    for point in points:
        sweep_logger.info(f'{sweep_id} {SweepEventType.POINT.value} a={point.param_value}')
        if point.classified == CLASSIFICATIONS.DIVERGED:
            sweep_logger.warning(
                f'{sweep_id} {SweepEventType.DIVERGE.value} a={point.param_value} t={point.failure_time}'
            )
        else:
            sweep_logger.info(
                f'{sweep_id} {SweepEventType.CLASSIFY.value} a={point.param_value} '
                f'{point.classified} amplitude={point.amplitude}'
            )
    sweep_logger.info(f'{sweep_id} {SweepEventType.COMPLETE.value}')
    return points


def phase_portrait(spec: ModelSpec, a: float, cfg: SweepConfig) -> PhasePortrait:
    """
    :raises DivergenceError: carrying the partial trajectory
    """
    spec = spec.with_gain(a)
    window = steady_window(_simulate(spec, cfg), cfg.transient_fraction)
    if spec.is_model_a:
        pairs = np.column_stack([window.rate, window.queue])
    else:
        pairs = np.column_stack([window.rate, window.delayed(0)])
    return PhasePortrait(pairs=pairs, param_value=a)


def onset_of_cycle(cfg: SweepConfig, workers: int | None = None) -> float:
    """
    Smallest sampled gain that no longer converges, refined by bisection against
    the converged sample below it. A diverged sample counts as unstable: with
    queue feedback a growing oscillation can reach the singular load C.
    :raises PreconditionError: when the sweep does not bracket the onset
    """
    points = run_sweep(cfg, workers)
    first_unstable = next((i for i, point in enumerate(points)
                           if point.classified != CLASSIFICATIONS.CONVERGED), None)
    if first_unstable is None:
        raise PreconditionError(f'no limit cycle in a=[{cfg.lo}, {cfg.hi}]')
    if first_unstable == 0:
        raise PreconditionError(f'no converged sample below a={points[0].param_value}')

    lo, hi = points[first_unstable - 1].param_value, points[first_unstable].param_value
    sweep_id = uuid.uuid4()
    while hi - lo > ONSET_TOLERANCE:
        mid = 0.5 * (lo + hi)
        point = run_point(cfg, mid)
        sweep_logger.info(f'{sweep_id} {SweepEventType.REFINE.value} a={mid} {point.classified}')
        if point.classified == CLASSIFICATIONS.CONVERGED:
            lo = mid
        else:
            hi = mid
    onset = 0.5 * (lo + hi)
    sweep_logger.info(f'{sweep_id} {SweepEventType.ONSET.value} a={onset}')
    return onset


def impact_of_utilization(configs: Mapping[str, SweepConfig],
                          workers: int | None = None) -> list[tuple[str, float]]:
    """
    Onset gain per labelled configuration, e.g. 90% against 70% utilization.
    Only onsets are compared. With queue feedback a run just past the onset
    grows until the delayed load reaches C and diverges (b = 0.02 already at
    a = 0.83), so no cycle amplitude above the onset exists to compare.
    """
    return [(label, onset_of_cycle(cfg, workers)) for label, cfg in configs.items()]


# -- reference configurations -------------------------------------------

MODEL_A_PHASE_GAINS = {
    VARIANTS.A_NONSWITCHED: (1.1, 1.5, 1.9),
    VARIANTS.A_SWITCHED: (1.0, 1.8, 3.3),
}
# phase portrait gains with queue feedback, one triple per utilization;
# the pairing of triples and utilizations is not checked
QUEUE_PHASE_GAINS = ((0.652, 0.638, 0.586), (0.876, 0.858, 0.788))
NOQUEUE_GAINS = (1.0, 1.4, 1.6, 2.0)


def reference_model_a(switched: bool, a: float = 1.0) -> ModelSpec:
    variant = VARIANTS.A_SWITCHED if switched else VARIANTS.A_NONSWITCHED
    return ModelSpec(variant, ModelAParams(a=a, beta=0.3, capacity=100_000, rtt=0.1, flows=100, switched=switched))


def reference_model_b(b: float = 0.0, gamma: float = 1.0, a: float = 1.0) -> ModelSpec:
    variant = VARIANTS.B_QUEUE if b > 0 else VARIANTS.B_NOQUEUE
    return ModelSpec(variant, ModelBParams(a=a, b=b, capacity=10, rtt=1, gamma=gamma))


def example_configs() -> dict[str, SweepConfig]:
    return {
        'a-nonswitched': SweepConfig(reference_model_a(False), lo=0.8, hi=2.0, steps=13),
        'a-switched': SweepConfig(reference_model_a(True), lo=0.8, hi=3.3, steps=26),
        'b-queue-90': SweepConfig(reference_model_b(b=0.02), lo=0.5, hi=1.5, steps=21),
        'b-queue-70': SweepConfig(reference_model_b(b=0.18), lo=0.5, hi=1.5, steps=21),
        'b-noqueue-90': SweepConfig(reference_model_b(gamma=0.9), lo=1.0, hi=2.0, steps=11),
        'b-noqueue-70': SweepConfig(reference_model_b(gamma=0.7), lo=1.0, hi=2.0, steps=11),
    }
