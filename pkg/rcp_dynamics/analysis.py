"""
Closed-form local stability of the RCP fluid models.

Both models are analysed in the nondimensional time lambda = T S (or tau S).
Model A linearises to  l^2 e^l + a l + beta = 0  (l e^l + a = 0 without the
queue term). Model B linearises to  l + kappa tau e^{-l} = 0  with
kappa tau = a xi(b).

The classical proof deforms the delay by a factor eta in [0, 1]: at eta = 0 all
roots are stable, and stability at eta = 1 holds iff the first eta at which a
root reaches the imaginary axis exceeds 1. Only eta = 1 is physical, so eta
appears here solely through ``crossing_delay_ratio``.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from rcp_dynamics.conf import get_threads
from rcp_dynamics.constants import CHART_MODELS
from rcp_dynamics.exceptions import DomainError, ParameterError, PreconditionError
from rcp_dynamics.logger import logger
from rcp_dynamics.params import model_b_xi
from rcp_dynamics.specroots import CharEq, SearchBox, rightmost_real_part

HALF_PI = math.pi / 2
BOUNDARY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class StabilityVerdict:
    """
    :param margin: positive inside the stable region; distance in a to the nearest
        boundary, except for Model A above the tip of its stable band where it is eta* - 1
    :param critical_a: gain at which stability is lost as a increases
    :param omega_cross: crossing frequency in nondimensional time, when a crossing exists
    :param lower_critical_a: lower edge of the Model A stable band (beta > 0)
    """
    stable: bool
    margin: float
    critical_a: float
    omega_cross: float | None = None
    lower_critical_a: float | None = None


def _check_gain(a: float) -> None:
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f'a must be positive, got {a}')


def _check_non_negative(name: str, value: float) -> None:
    if not (math.isfinite(value) and value >= 0):
        raise DomainError(f'{name} must be non-negative, got {value}')


# -- Model A ---------------------------------------------------------------

def crossing_frequency_model_a(a: float, beta: float) -> float:
    """omega with omega^4 = a^2 omega^2 + beta^2, from l = i omega in the eta-deformed equation."""
    return math.sqrt((a * a + math.sqrt(a ** 4 + 4 * beta * beta)) / 2)


def crossing_delay_ratio(a: float, beta: float) -> float:
    """
    eta* = asin(a / omega) / omega, the first delay factor putting a root on the
    imaginary axis. Stable iff eta* > 1 (principal branch, omega < pi/2).
    """
    omega = crossing_frequency_model_a(a, beta)
    return math.asin(min(1.0, a / omega)) / omega


@lru_cache(maxsize=1)
def _band_tip() -> tuple[float, float, float]:
    """(omega, a, beta) where beta = omega^2 cos(omega) peaks on (0, pi/2)."""
    omega = brentq(lambda w: 2 * math.cos(w) - w * math.sin(w), 0.5, 1.5, xtol=1e-15)
    return omega, omega * math.sin(omega), omega * omega * math.cos(omega)


def model_a_tip() -> tuple[float, float]:
    """(a, beta) at the tip of the Model A stable band; no gain is stable above this beta."""
    _, a_tip, beta_tip = _band_tip()
    return a_tip, beta_tip


@lru_cache(maxsize=1024)
def _band_frequencies(beta: float) -> tuple[float, float] | None:
    omega_tip, _, beta_tip = _band_tip()
    if beta >= beta_tip:
        return None

    def g(w):
        return w * w * math.cos(w) - beta

    return (brentq(g, 1e-300, omega_tip, xtol=1e-15),
            brentq(g, omega_tip, HALF_PI, xtol=1e-15))


def model_a_band(beta: float) -> tuple[float, float] | None:
    """
    Open interval of stable gains at fixed beta, or None above the tip.
    The boundary is the curve (a, beta) = (w sin w, w^2 cos w), w in (0, pi/2).
    """
    _check_non_negative('beta', beta)
    if beta == 0:
        return 0.0, HALF_PI
    frequencies = _band_frequencies(beta)
    if frequencies is None:
        return None
    return tuple(w * math.sin(w) for w in frequencies)


def stability_model_a(a: float, beta: float) -> StabilityVerdict:
    _check_gain(a)
    _check_non_negative('beta', beta)
    if beta == 0:
        margin = HALF_PI - a
        return StabilityVerdict(stable=margin > 0, margin=margin, critical_a=HALF_PI, omega_cross=HALF_PI)

    band = model_a_band(beta)
    if band is None:
        _, a_tip, _ = _band_tip()
        margin = crossing_delay_ratio(a, beta) - 1
        return StabilityVerdict(stable=False, margin=margin, critical_a=a_tip)

    lower, upper = band
    margin = min(a - lower, upper - a)
    return StabilityVerdict(
        stable=margin > 0,
        margin=margin,
        critical_a=upper,
        omega_cross=_band_frequencies(beta)[1],
        lower_critical_a=lower,
    )


# -- Model B ---------------------------------------------------------------

def stability_model_b(a: float, b: float, sigma: float = 1.0) -> StabilityVerdict:
    """
    Stable iff kappa tau = a xi(b) < pi/2. xi tends to 2 as b -> 0+ (critical
    gain pi/4) but equals 1 at b = 0 exactly (critical gain pi/2).
    """
    _check_gain(a)
    _check_non_negative('b', b)
    critical_a = HALF_PI / model_b_xi(b, sigma)
    margin = critical_a - a
    return StabilityVerdict(stable=margin > 0, margin=margin, critical_a=critical_a, omega_cross=HALF_PI)


def hopf_transversality(a: float, b: float, tau: float, sigma: float = 1.0) -> int:
    """
    Sign of Re(dl/da) where the root pair crosses at l = i (pi/2) / tau.
    Differentiating l + (a xi / tau) e^{-l tau} = 0 gives
    dl/da = 1 / (a tau - (tau / xi) e^{l tau}).
    :raises PreconditionError: if (a, b) is not on the boundary within 1e-6
    """
    if not tau > 0:
        raise DomainError(f'tau must be positive, got {tau}')
    verdict = stability_model_b(a, b, sigma)
    if abs(a - verdict.critical_a) > BOUNDARY_TOLERANCE:
        raise PreconditionError(f'a={a} is not on the stability boundary a={verdict.critical_a} for b={b}')
    xi = model_b_xi(b, sigma)
    lam = 1j * verdict.omega_cross / tau
    d_lambda = 1 / (a * tau - (tau / xi) * np.exp(lam * tau))
    return int(np.sign(d_lambda.real))


def optimal_a_no_queue(tau: float) -> float:
    """
    Gain giving the fastest decay of l + (a / tau) e^{-l tau} = 0: the rightmost
    root is a double root at l = -1/tau, which forces a = -l tau e^{l tau} = 1/e.
    """
    if not tau > 0:
        raise DomainError(f'tau must be positive, got {tau}')
    lam_tau = -1.0
    return -lam_tau * math.exp(lam_tau)


def convergence_rate(a: float, tau: float, box: SearchBox | None = None) -> float:
    """Decay rate -Re(l)/tau of the slowest mode of Model B without queue feedback."""
    _check_gain(a)
    return -rightmost_real_part(CharEq.scalar_delay(a), box) / tau


# -- oracle cross-check ----------------------------------------------------

def oracle_critical_a(model: str, second: float, box: SearchBox | None = None) -> float:
    """
    Gain where the oracle's rightmost real part changes sign, bracketed around the
    analytic boundary.
    :raises PreconditionError: when Model A has no stable band at this beta
    """
    if model == CHART_MODELS.A:
        band = model_a_band(second)
        if band is None:
            raise PreconditionError(f'Model A has no stable gain at beta={second}')

        def real_part(a):
            return rightmost_real_part(CharEq.for_model_a(a, second), box)
        lo, hi = 0.5 * (band[0] + band[1]), band[1] + 0.25
    elif model == CHART_MODELS.B:
        xi = model_b_xi(second)

        def real_part(a):
            return rightmost_real_part(CharEq.scalar_delay(a * xi), box)
        critical = HALF_PI / xi
        lo, hi = 0.5 * critical, critical + 0.5
    else:
        raise ParameterError(f'unknown chart model {model!r}')
    return brentq(real_part, lo, hi, xtol=1e-8)


# -- charts ----------------------------------------------------------------

@dataclass(frozen=True)
class StabilityChart:
    """Row-major grid: row i holds second_values[i], column j holds a_values[j]."""
    model: str
    a_values: np.ndarray
    second_values: np.ndarray
    verdicts: tuple[tuple[StabilityVerdict, ...], ...]

    @property
    def second_name(self) -> str:
        return 'beta' if self.model == CHART_MODELS.A else 'b'

    def cells(self):
        for second, row in zip(self.second_values, self.verdicts):
            for a, verdict in zip(self.a_values, row):
                yield float(a), float(second), verdict

    def margins(self) -> np.ndarray:
        return np.array([[verdict.margin for verdict in row] for row in self.verdicts])


def _verdict(model: str, a: float, second: float) -> StabilityVerdict:
    if model == CHART_MODELS.A:
        return stability_model_a(a, second)
    return stability_model_b(a, second)


def stability_chart(model: str, a_range: tuple[float, float], second_range: tuple[float, float],
                    resolution: tuple[int, int], workers: int | None = None) -> StabilityChart:
    """
    Evaluates the analytic verdict on a rectangle of the (a, beta) or (a, b) plane.
    :param a_range: (lo, hi), lo > 0
    :param second_range: (lo, hi) of beta or b, lo >= 0
    :param resolution: (points along a, points along the second axis), each >= 2
    """
    if model not in CHART_MODELS:
        raise ParameterError(f'unknown chart model {model!r}')
    (a_lo, a_hi), (s_lo, s_hi) = a_range, second_range
    if not (0 < a_lo < a_hi and 0 <= s_lo < s_hi):
        raise ParameterError(f'invalid chart bounds a={a_range}, second={second_range}')
    if min(resolution) < 2:
        raise ParameterError(f'resolution must be >= 2 per axis, got {resolution}')

    a_values = np.linspace(a_lo, a_hi, resolution[0])
    second_values = np.linspace(s_lo, s_hi, resolution[1])

    def row(second):
        return tuple(_verdict(model, float(a), float(second)) for a in a_values)

    workers = workers or get_threads()
    logger.info(f'chart {model} {resolution[0]}x{resolution[1]} on {workers} worker(s)')
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(row, second_values))
    else:
        rows = tuple(row(second) for second in second_values)
    return StabilityChart(model=model, a_values=a_values, second_values=second_values, verdicts=rows)


def boundary_polyline(chart: StabilityChart) -> list[tuple[float, float]]:
    """
    Zero contour of the margin, interpolated linearly along a in every row.
    Rows with two crossings (the Model A band) contribute their lower edge on the
    way up and their upper edge on the way back, giving one connected curve.
    """
    margins = chart.margins()
    a = chart.a_values
    lower, upper = [], []
    for second, row in zip(chart.second_values, margins):
        crossings = []
        for j in np.flatnonzero(np.sign(row[:-1]) != np.sign(row[1:])):
            m0, m1 = row[j], row[j + 1]
            crossings.append(float(a[j] - m0 * (a[j + 1] - a[j]) / (m1 - m0)))
        if crossings:
            lower.append((crossings[0], float(second)))
        if len(crossings) > 1:
            upper.append((crossings[-1], float(second)))
    return lower + upper[::-1]
