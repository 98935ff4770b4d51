"""
Parameter records and equilibrium algebra of the two RCP fluid models.

Model A carries the rate/queue system with a common RTT ``T`` shared by ``n``
identical flows. Model B is the single-link small-buffer model, whose queue
enters through the stationary mean queue ``p(y) = y sigma^2 / (2 (C - y))``.
"""
import math
import numbers
from dataclasses import dataclass

from rcp_dynamics.exceptions import DomainError, ParameterError


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def _finite(*values) -> bool:
    return all(
        isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)
        for value in values
    )


@dataclass(frozen=True)
class ModelAParams:
    a: float
    beta: float
    capacity: float
    rtt: float
    flows: int = 1
    switched: bool = False

    def __post_init__(self):
        _require(_finite(self.a, self.beta, self.capacity, self.rtt), 'Model A parameters must be finite numbers')
        _require(self.a >= 0, f'a must be non-negative, got {self.a}')
        _require(self.beta >= 0, f'beta must be non-negative, got {self.beta}')
        _require(self.capacity > 0, f'capacity must be positive, got {self.capacity}')
        _require(self.rtt > 0, f'rtt must be positive, got {self.rtt}')
        _require(isinstance(self.flows, int) and not isinstance(self.flows, bool) and self.flows >= 1,
                 f'flows must be an integer >= 1, got {self.flows!r}')


@dataclass(frozen=True)
class ModelBParams:
    a: float
    b: float
    capacity: float
    rtt: float
    sigma: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        _require(_finite(self.a, self.b, self.capacity, self.rtt, self.sigma, self.gamma),
                 'Model B parameters must be finite numbers')
        _require(self.a >= 0, f'a must be non-negative, got {self.a}')
        _require(self.b >= 0, f'b must be non-negative, got {self.b}')
        _require(self.capacity > 0, f'capacity must be positive, got {self.capacity}')
        _require(self.rtt > 0, f'rtt must be positive, got {self.rtt}')
        _require(self.sigma > 0, f'sigma must be positive, got {self.sigma}')
        _require(0 < self.gamma <= 1, f'gamma must lie in (0, 1], got {self.gamma}')
        # virtual capacity only substitutes for queue feedback
        _require(self.b == 0 or self.gamma == 1, 'gamma must be 1 when b > 0')

    @property
    def effective_capacity(self) -> float:
        """gamma * C without queue feedback, C otherwise."""
        return self.gamma * self.capacity if self.b == 0 else self.capacity


@dataclass(frozen=True)
class Equilibrium:
    rate_star: float
    queue_star: float
    utilization: float


def mean_queue(y, capacity: float, sigma: float = 1.0):
    """Stationary mean queue p(y) of the reflected Brownian workload, singular at y = C."""
    return y * sigma ** 2 / (2 * (capacity - y))


def equilibrium_model_a(p: ModelAParams) -> Equilibrium:
    return Equilibrium(rate_star=p.capacity / p.flows, queue_star=0.0, utilization=1.0)


def _rate_fraction(s: float) -> float:
    """
    R*/C = (s + 4 - sqrt(s^2 + 8s)) / 4 for s = b sigma^2, rewritten as
    4 / (s + 4 + sqrt(s^2 + 8s)), free of cancellation for every s >= 0.
    """
    if s == 0:
        return 1.0
    return 4 / (s + 4 + math.sqrt(s * s + 8 * s))


def equilibrium_model_b(p: ModelBParams) -> Equilibrium:
    if p.b == 0:
        rate_star = p.gamma * p.capacity
        return Equilibrium(rate_star=rate_star, queue_star=0.0, utilization=rate_star / p.capacity)

    rate_star = p.capacity * _rate_fraction(p.b * p.sigma ** 2)
    return Equilibrium(
        rate_star=rate_star,
        queue_star=mean_queue(rate_star, p.capacity, p.sigma),
        utilization=rate_star / p.capacity,
    )


def equilibrium_residual(p: ModelBParams, rate: float) -> float:
    """C - R - b C p(R); zero at the Model B fixed point."""
    return p.capacity - rate - p.b * p.capacity * mean_queue(rate, p.capacity, p.sigma)


def model_b_xi(b: float, sigma: float = 1.0) -> float:
    """
    xi = (R* + C) / C, the linearised gain factor of Model B.
    Equals 2 + s/4 - sqrt(s^2/16 + s/2) with s = b sigma^2, and 1 at b = 0
    where R* = C is replaced by the virtual capacity.
    """
    if b < 0:
        raise DomainError(f'b must be non-negative, got {b}')
    if b == 0:
        return 1.0
    return 1 + _rate_fraction(b * sigma ** 2)


def model_b_kappa(a: float, b: float, tau: float, sigma: float = 1.0) -> float:
    return a * model_b_xi(b, sigma) / tau


def utilization_expansion(b: float, sigma: float = 1.0) -> float:
    """Leading terms 1 - sigma sqrt(b/2) of the utilization expansion in b."""
    return 1 - sigma * math.sqrt(b / 2)


def map_beta_to_b(a: float, beta: float, capacity: float, mean_rtt: float) -> float:
    """
    Relates the Model A queue gain to the Model B one: b = beta / (a C T).
    :raises DomainError: when a = 0, the mapping is undefined
    """
    if a == 0:
        raise DomainError('b is undefined for a = 0')
    if a < 0 or capacity <= 0 or mean_rtt <= 0:
        raise DomainError('map_beta_to_b requires a > 0, capacity > 0 and mean_rtt > 0')
    return beta / (a * capacity * mean_rtt)
