from dataclasses import dataclass, field, replace

import numpy as np

from rcp_dynamics.exceptions import ParameterError, PreconditionError


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Uniformly sampled solution of a single-delay DDE.

    ``samples`` has shape (steps, dimension); sample k sits at ``t0 + k dt``.
    ``history`` holds the ``delay_steps`` grid values preceding sample 0, so
    delayed coordinates can be read for every sample.
    """
    t0: float
    dt: float
    samples: np.ndarray
    delay_steps: int
    history: np.ndarray = field(default=None)
    failure_time: float | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, np.newaxis]
        object.__setattr__(self, 'samples', samples)
        if self.history is None:
            object.__setattr__(self, 'history', np.repeat(samples[:1], self.delay_steps, axis=0))
        if self.dt <= 0:
            raise ParameterError(f'dt must be positive, got {self.dt}')

    def __len__(self):
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (len(self) - 1)

    @property
    def rate(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def queue(self) -> np.ndarray:
        if self.dimension < 2:
            raise AttributeError('trajectory has no queue component')
        return self.samples[:, 1]

    def delayed(self, component: int = 0) -> np.ndarray:
        """Values of ``component`` one delay earlier than each sample."""
        extended = np.concatenate([self.history[:, component], self.samples[:, component]])
        return extended[:len(self)]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.samples)))


def steady_window(traj: Trajectory, transient_fraction: float) -> Trajectory:
    """
    Drops the leading ``transient_fraction`` of samples.
    The delay history of the suffix is taken from the discarded part,
    so delayed coordinates stay exact.
    """
    if not 0 <= transient_fraction < 1:
        raise ParameterError(f'transient_fraction must lie in [0, 1), got {transient_fraction}')
    start = int(np.floor(transient_fraction * len(traj) + 1e-9))
    if start >= len(traj):
        raise PreconditionError('steady window is empty')
    if start == 0:
        return traj

    extended = np.concatenate([traj.history, traj.samples])
    m = traj.delay_steps
    return replace(
        traj,
        t0=traj.t0 + start * traj.dt,
        samples=traj.samples[start:],
        history=extended[start:start + m],
    )
