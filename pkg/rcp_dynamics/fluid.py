"""
Right-hand sides of the RCP fluid models and their binding to the DDE engine.

Model A (n identical flows, common RTT T):
    dR/dt = R / (C T) * (a (C - y) - beta q / T),   y(t) = n R(t - T)
    dq/dt = y - C                                   (gated at q = 0 when switched)

Model B (single link, RTT tau):
    dR/dt = a R / (C tau) * (C - y - b C p(y)),     y(t) = R(t - tau)
with C replaced by gamma C when b = 0.
"""
from dataclasses import dataclass, replace

import numpy as np

from rcp_dynamics.constants import MODEL_A_VARIANTS, VARIANTS
from rcp_dynamics.engine import DdeProblem
from rcp_dynamics.exceptions import ParameterError, SingularityError
from rcp_dynamics.params import (
    Equilibrium, ModelAParams, ModelBParams, equilibrium_model_a, equilibrium_model_b, mean_queue,
)


@dataclass(frozen=True)
class ModelSpec:
    variant: str
    params: ModelAParams | ModelBParams

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ParameterError(f'unknown model variant {self.variant!r}')
        if self.is_model_a:
            if not isinstance(self.params, ModelAParams):
                raise ParameterError(f'{self.variant} requires ModelAParams')
            if self.params.switched != (self.variant == VARIANTS.A_SWITCHED):
                object.__setattr__(self, 'params', replace(self.params, switched=self.variant == VARIANTS.A_SWITCHED))
        else:
            if not isinstance(self.params, ModelBParams):
                raise ParameterError(f'{self.variant} requires ModelBParams')
            if self.variant == VARIANTS.B_QUEUE and self.params.b <= 0:
                raise ParameterError('the queue variant of Model B requires b > 0')
            if self.variant == VARIANTS.B_NOQUEUE and self.params.b != 0:
                raise ParameterError('the no-queue variant of Model B forces b = 0')

    @property
    def is_model_a(self) -> bool:
        return self.variant in MODEL_A_VARIANTS

    @property
    def rtt(self) -> float:
        return self.params.rtt

    @property
    def capacity(self) -> float:
        return self.params.capacity

    @property
    def dimension(self) -> int:
        return 2 if self.is_model_a else 1

    def with_gain(self, a: float) -> 'ModelSpec':
        return replace(self, params=replace(self.params, a=a))

    def equilibrium(self) -> Equilibrium:
        if self.is_model_a:
            return equilibrium_model_a(self.params)
        return equilibrium_model_b(self.params)

    def rhs(self, state, delayed, t=0.0) -> np.ndarray:
        if self.is_model_a:
            return rhs_model_a(state, delayed, self.params)
        return np.array([rhs_model_b(state[0], delayed[0], self.params)])


def rhs_model_a(state, delayed, p: ModelAParams) -> np.ndarray:
    """
    :param state: (rate, queue) at t
    :param delayed: (rate, queue) at t - T
    :return: (d_rate, d_queue); the switched gate is left to the engine's projection
    """
    rate, queue = state[0], state[1]
    load = p.flows * delayed[0]
    d_rate = rate / (p.capacity * p.rtt) * (p.a * (p.capacity - load) - p.beta * queue / p.rtt)
    return np.array([d_rate, load - p.capacity])


def rhs_model_b(state: float, delayed: float, p: ModelBParams) -> float:
    """
    :raises SingularityError: when b > 0 and the delayed load reaches capacity
    """
    if p.b == 0:
        capacity = p.effective_capacity
        return p.a * state / (capacity * p.rtt) * (capacity - delayed)
    if delayed >= p.capacity:
        raise SingularityError(f'mean queue is singular at y={delayed} >= C={p.capacity}')
    mismatch = p.capacity - delayed - p.b * p.capacity * mean_queue(delayed, p.capacity, p.sigma)
    return p.a * state / (p.capacity * p.rtt) * mismatch


def initial_state(spec: ModelSpec, perturbation: float = 0.0) -> np.ndarray:
    """Equilibrium rate scaled by (1 + perturbation); the queue starts empty."""
    rate = (1 + perturbation) * spec.equilibrium().rate_star
    if spec.is_model_a:
        return np.array([rate, 0.0])
    return np.array([rate])


def build_problem(spec: ModelSpec, t_end: float, dt: float | None = None,
                  perturbation: float = 0.0) -> DdeProblem:
    """Binds ``spec`` to the engine with a constant perturbed-equilibrium history."""
    start = initial_state(spec, perturbation)
    projection = (False, True) if spec.variant == VARIANTS.A_SWITCHED else None
    return DdeProblem(
        rhs=spec.rhs,
        delay=spec.rtt,
        history=lambda t: start,
        t_end=t_end,
        dt=dt,
        dimension=spec.dimension,
        projection=projection,
        scale=spec.capacity,
    )
