"""
Fixed-step integrator for autonomous DDE systems with one discrete delay.

The delay is an exact multiple ``m`` of the step, so delayed values on the grid
are read directly. Classical RK4 needs the delayed state at half steps too:
inside the history interval they come from the history callable, afterwards
from cubic Hermite interpolation of the stored (value, derivative) pairs.
"""
import math
import numbers
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from rcp_dynamics.conf import get_setting
from rcp_dynamics.exceptions import ConfigurationError, DivergenceError, ParameterError, SingularityError
from rcp_dynamics.logger import logger
from rcp_dynamics.trajectory import Trajectory

Rhs = Callable[[np.ndarray, np.ndarray, float], np.ndarray]
History = Callable[[float], Sequence[float]]


@dataclass(frozen=True)
class DdeProblem:
    """
    :param rhs: f(state, delayed_state, t) -> derivative
    :param delay: the single discrete delay, > 0
    :param history: state on [-delay, 0]
    :param t_end: integration horizon, > 0
    :param dt: requested step; lowered to delay / ceil(delay / dt). Defaults to delay / 100
    :param dimension: state size
    :param projection: per-component flags; flagged components are kept non-negative
    :param scale: magnitude used by the divergence guard (capacity for the RCP models)
    """
    rhs: Rhs
    delay: float
    history: History
    t_end: float
    dt: float | None = None
    dimension: int = 1
    projection: tuple[bool, ...] | None = None
    scale: float = 1.0

    def __post_init__(self):
        for name in ('delay', 't_end', 'dt'):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, numbers.Real) or isinstance(value, bool)):
                raise ParameterError(f'{name} must be a number, got {value!r}')
        if not (self.delay > 0 and math.isfinite(self.delay)):
            raise ParameterError(f'delay must be positive, got {self.delay}')
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ParameterError(f't_end must be positive, got {self.t_end}')
        if self.dt is not None and not self.dt > 0:
            raise ParameterError(f'dt must be positive, got {self.dt}')
        if self.projection is not None and len(self.projection) != self.dimension:
            raise ParameterError('projection flags must match the state dimension')

        if self.dt is None:
            steps = int(get_setting('DEFAULT_DELAY_STEPS'))
        else:
            steps = math.ceil(self.delay / self.dt - 1e-9)
        if not 1 <= steps <= get_setting('MAX_DELAY_STEPS'):
            raise ConfigurationError(f'delay {self.delay} is not commensurate with dt {self.dt} '
                                     f'within {get_setting("MAX_DELAY_STEPS")} steps')
        object.__setattr__(self, 'dt', self.delay / steps)

    @property
    def delay_steps(self) -> int:
        return round(self.delay / self.dt)

    @property
    def steps(self) -> int:
        return math.ceil(self.t_end / self.dt - 1e-9)


class _DelayedState:
    """Delayed state lookup over the history buffer and the computed grid."""

    def __init__(self, problem: DdeProblem, values: np.ndarray, derivatives: np.ndarray):
        m, h = problem.delay_steps, problem.dt
        self.m = m
        self.h = h
        self.values = values
        self.derivatives = derivatives
        # history on the grid and at the half steps, index i <-> t = (i - m) h
        self.history_grid = np.array([problem.history((i - m) * h) for i in range(m + 1)],
                                     dtype=float).reshape(m + 1, problem.dimension)
        self.history_mid = np.array([problem.history((i - m + 0.5) * h) for i in range(m)],
                                    dtype=float).reshape(m, problem.dimension)

    def at(self, k: int, half: bool) -> np.ndarray:
        """State at t_k - delay (+ h/2 when ``half``)."""
        j = k - self.m
        if j < 0:
            return self.history_mid[k] if half else self.history_grid[k]
        if not half:
            return self.values[j]
        y0, y1 = self.values[j], self.values[j + 1]
        d0, d1 = self.derivatives[j], self.derivatives[j + 1]
        return 0.5 * (y0 + y1) + self.h * (d0 - d1) / 8

    def at_end(self, k: int) -> np.ndarray:
        """State at t_{k+1} - delay."""
        j = k + 1 - self.m
        if j <= 0:
            return self.history_grid[k + 1]
        return self.values[j]


def integrate(problem: DdeProblem) -> Trajectory:
    """
    Integrates ``problem`` from t = 0 with RK4 on the method-of-steps grid.
    :raises DivergenceError: on a non-finite state, a state above
        DIVERGENCE_FACTOR * scale, or a singular right-hand side
    """
    h, m, n = problem.dt, problem.delay_steps, problem.steps
    dim = problem.dimension
    bound = get_setting('DIVERGENCE_FACTOR') * problem.scale
    projected = np.array(problem.projection or [False] * dim, dtype=bool)
    has_projection = bool(projected.any())

    values = np.empty((n + 1, dim))
    derivatives = np.empty((n + 1, dim))
    delayed = _DelayedState(problem, values, derivatives)
    values[0] = delayed.history_grid[m]
    if has_projection:
        values[0] = np.where(projected, np.maximum(values[0], 0.0), values[0])

    def slope(state, lagged, t):
        d = np.asarray(problem.rhs(state, lagged, t), dtype=float).reshape(dim)
        if has_projection:
            # the gate max(0, .) applies while a projected component sits at zero
            d = np.where(projected & (state <= 0) & (d < 0), 0.0, d)
        return d

    def partial(k, t_fail):
        return Trajectory(t0=0.0, dt=h, samples=values[:k + 1].copy(), delay_steps=m,
                          history=delayed.history_grid[:m].copy(), failure_time=t_fail)

    logger.debug(f'integrate dt={h} delay_steps={m} steps={n}')
    for k in range(n):
        t = k * h
        y = values[k]
        try:
            k1 = slope(y, delayed.at(k, False), t)
            derivatives[k] = k1
            lag_mid = delayed.at(k, True)
            k2 = slope(y + 0.5 * h * k1, lag_mid, t + 0.5 * h)
            k3 = slope(y + 0.5 * h * k2, lag_mid, t + 0.5 * h)
            k4 = slope(y + h * k3, delayed.at_end(k), t + h)
        except SingularityError as error:
            logger.warning(f'integration diverged at t={t}: {error}')
            raise DivergenceError(f'singular right-hand side at t={t}: {error}', t, partial(k, t)) from error

        y_next = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        if has_projection:
            y_next = np.where(projected, np.maximum(y_next, 0.0), y_next)
        if not np.all(np.isfinite(y_next)) or np.max(np.abs(y_next)) > bound:
            t_fail = (k + 1) * h
            logger.warning(f'integration diverged at t={t_fail}')
            raise DivergenceError(f'state left the finite region at t={t_fail}', t_fail, partial(k, t_fail))
        values[k + 1] = y_next

    return Trajectory(t0=0.0, dt=h, samples=values, delay_steps=m,
                      history=delayed.history_grid[:m].copy())
