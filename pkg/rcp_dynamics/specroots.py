"""
Rightmost-root oracle for the characteristic quasi-polynomials of the RCP models.

Three kinds are supported, all with real non-negative coefficients:

    a-full        f(l) = l^2 e^l + a l + beta
    a-noqueue     f(l) = l e^l + a
    scalar-delay  f(l) = l + k e^{-l},   k = kappa tau

Roots with Re(l) >= -L lie in a bounded strip: for a-noqueue |l| = a e^{-Re l},
for scalar-delay |l| = k e^{-Re l}, and for a-full |l|^2 <= (a |l| + beta) e^{-Re l}.
The search therefore scans a finite box of the upper half plane and infers the
conjugates.

Phase 1 samples f on a grid, flags cells whose boundary phase winds and grid
nodes where |f| is a local minimum. Phase 2 polishes every seed with Newton's
method using the analytic derivative, merges coincident roots and records
their multiplicity.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import minimum_filter

from rcp_dynamics.conf import get_setting
from rcp_dynamics.constants import CHAR_EQ_KINDS
from rcp_dynamics.exceptions import ParameterError, PartialSpectrumWarning, SpectrumError
from rcp_dynamics.logger import logger

NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITERATIONS = 60
DEDUPLICATION_TOLERANCE = 1e-8
# a root of f' closer than this marks a repeated root
MULTIPLE_ROOT_TOLERANCE = 1e-5
# irrational grid offsets keep roots on the axes (l = -1, l = i pi/2, ...) off cell edges
RE_OFFSET = 0.3819660112501051
IM_OFFSET = 0.2718281828459045


@dataclass(frozen=True)
class CharEq:
    kind: str
    a: float = 0.0
    beta: float = 0.0
    kappa_tau: float = 0.0

    def __post_init__(self):
        if self.kind not in CHAR_EQ_KINDS:
            raise ParameterError(f'unknown characteristic equation kind {self.kind!r}')
        for name in ('a', 'beta', 'kappa_tau'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ParameterError(f'{name} must be finite and non-negative, got {value}')

    @classmethod
    def for_model_a(cls, a: float, beta: float) -> 'CharEq':
        """Full equation for beta > 0; for beta = 0 the factor l is divided out."""
        if beta == 0:
            return cls(CHAR_EQ_KINDS.MODEL_A_NOQUEUE, a=a)
        return cls(CHAR_EQ_KINDS.MODEL_A_FULL, a=a, beta=beta)

    @classmethod
    def scalar_delay(cls, kappa_tau: float) -> 'CharEq':
        return cls(CHAR_EQ_KINDS.SCALAR_DELAY, kappa_tau=kappa_tau)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        if self.kind == CHAR_EQ_KINDS.MODEL_A_FULL:
            return lam ** 2 * np.exp(lam) + self.a * lam + self.beta
        if self.kind == CHAR_EQ_KINDS.MODEL_A_NOQUEUE:
            return lam * np.exp(lam) + self.a
        return lam + self.kappa_tau * np.exp(-lam)

    def derivative(self, lam):
        lam = np.asarray(lam, dtype=complex)
        if self.kind == CHAR_EQ_KINDS.MODEL_A_FULL:
            return (lam ** 2 + 2 * lam) * np.exp(lam) + self.a
        if self.kind == CHAR_EQ_KINDS.MODEL_A_NOQUEUE:
            return (1 + lam) * np.exp(lam)
        return 1 - self.kappa_tau * np.exp(-lam)

    def second_derivative(self, lam):
        lam = np.asarray(lam, dtype=complex)
        if self.kind == CHAR_EQ_KINDS.MODEL_A_FULL:
            return (lam ** 2 + 4 * lam + 2) * np.exp(lam)
        if self.kind == CHAR_EQ_KINDS.MODEL_A_NOQUEUE:
            return (2 + lam) * np.exp(lam)
        return self.kappa_tau * np.exp(-lam)


@dataclass(frozen=True)
class SearchBox:
    """Rectangle re_min <= Re <= re_max, 0 <= Im <= im_max scanned with square cells."""
    re_min: float = -10.0
    re_max: float = 5.0
    im_max: float = 40.0
    cell: float = field(default_factory=lambda: get_setting('ROOT_CELL'))

    def __post_init__(self):
        if not (math.isfinite(self.re_min) and math.isfinite(self.re_max) and math.isfinite(self.im_max)):
            raise ParameterError('search box bounds must be finite')
        if self.re_min >= self.re_max or self.im_max <= 0:
            raise ParameterError('search box must have positive extent')
        if not 0 < self.cell <= 0.05:
            raise ParameterError(f'cell size must lie in (0, 0.05], got {self.cell}')

    def contains(self, lam: complex, margin: float = 0.0) -> bool:
        return (self.re_min - margin <= lam.real <= self.re_max + margin
                and -margin <= lam.imag <= self.im_max + margin)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        h = self.cell
        re = self.re_min - RE_OFFSET * h + h * np.arange(math.ceil((self.re_max - self.re_min) / h) + 2)
        im = -IM_OFFSET * h + h * np.arange(math.ceil(self.im_max / h) + 2)
        return re, im


@dataclass(frozen=True)
class SpectrumResult:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    multiplicities: tuple[int, ...]
    search_box: SearchBox

    def __len__(self):
        return len(self.roots)

    @property
    def rightmost(self) -> complex:
        if not self.roots:
            raise SpectrumError('no characteristic root found in the search box')
        return self.roots[0]

    def as_records(self) -> list[dict]:
        return [
            {'re': root.real, 'im': root.imag, 'residual': residual, 'multiplicity': multiplicity}
            for root, residual, multiplicity in zip(self.roots, self.residuals, self.multiplicities)
        ]


def _wrapped(delta: np.ndarray) -> np.ndarray:
    return (delta + np.pi) % (2 * np.pi) - np.pi


def _seeds(eq: CharEq, box: SearchBox) -> tuple[np.ndarray, np.ndarray]:
    """Cell centers with nonzero winding and |f| minima, with the winding of each seed."""
    re, im = box.grid()
    z = re[np.newaxis, :] + 1j * im[:, np.newaxis]
    with np.errstate(over='ignore', invalid='ignore'):
        values = eq(z)
    phase = np.angle(values)

    # counter-clockwise around each cell: bottom, right, top, left
    winding = (_wrapped(phase[:-1, 1:] - phase[:-1, :-1])
               + _wrapped(phase[1:, 1:] - phase[:-1, 1:])
               + _wrapped(phase[1:, :-1] - phase[1:, 1:])
               + _wrapped(phase[:-1, :-1] - phase[1:, :-1]))
    winding = np.rint(np.nan_to_num(winding / (2 * np.pi), nan=0.0, posinf=0.0, neginf=0.0)).astype(int)
    rows, cols = np.nonzero(winding)
    centers = z[rows, cols] + 0.5 * box.cell * (1 + 1j)
    cell_winding = winding[rows, cols]

    magnitude = np.abs(values)
    magnitude[~np.isfinite(magnitude)] = np.inf
    is_minimum = (minimum_filter(magnitude, size=3, mode='nearest') == magnitude) & np.isfinite(magnitude)
    is_minimum[[0, -1], :] = False
    is_minimum[:, [0, -1]] = False
    minima = z[is_minimum]

    seeds = np.concatenate([centers, minima])
    windings = np.concatenate([cell_winding, np.zeros(minima.size, dtype=int)])
    return seeds, windings


def _newton(eq: CharEq, seeds: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam = seeds.astype(complex)
    converged = np.zeros(lam.shape, dtype=bool)
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        for _ in range(NEWTON_MAX_ITERATIONS):
            active = ~converged
            if not active.any():
                break
            f = eq(lam[active])
            df = eq.derivative(lam[active])
            step = f / df
            lam[active] = lam[active] - step
            scale = 1 + np.abs(lam[active]) ** 2
            done = (np.abs(f) <= NEWTON_TOLERANCE * scale) | (np.abs(step) <= 1e-15 * (1 + np.abs(lam[active])))
            bad = ~np.isfinite(lam[active])
            index = np.flatnonzero(active)
            converged[index[done & ~bad]] = True
            lam[index[bad]] = np.nan
    return lam, converged


def _residual_bound(lam: complex) -> float:
    return 1e-8 * (1 + abs(lam) ** 2)


def _polish_multiple(eq: CharEq, lam: complex) -> tuple[complex, int]:
    """
    Newton converges only linearly onto a double root. When f' has a root
    within MULTIPLE_ROOT_TOLERANCE, that root of f' is the double root of f.
    """
    with np.errstate(divide='ignore', invalid='ignore'):
        distance = abs(complex(eq.derivative(lam)) / complex(eq.second_derivative(lam)))
    if not distance <= MULTIPLE_ROOT_TOLERANCE:
        return lam, 1
    polished = lam
    for _ in range(NEWTON_MAX_ITERATIONS):
        step = complex(eq.derivative(polished)) / complex(eq.second_derivative(polished))
        polished -= step
        if abs(step) <= 1e-15 * (1 + abs(polished)):
            break
    if not abs(complex(eq(polished))) <= _residual_bound(polished):
        return lam, 1
    return polished, 2


def rightmost_roots(eq: CharEq, count: int = 1, box: SearchBox | None = None) -> SpectrumResult:
    """
    Locates the ``count`` rightmost roots of ``eq`` inside ``box`` (conjugates included).
    A repeated root is listed once per multiplicity.
    Emits PartialSpectrumWarning when fewer than ``count`` roots are found.
    """
    if count < 1:
        raise ParameterError(f'count must be >= 1, got {count}')
    box = box or SearchBox()
    seeds, windings = _seeds(eq, box)
    lam, converged = _newton(eq, seeds)

    logger.debug(f'{eq.kind}: {len(seeds)} seeds, {int(np.count_nonzero(windings))} winding cells, '
                 f'{int(converged.sum())} converged')

    found: list[list] = []  # [root, multiplicity]
    for root in lam[converged]:
        root = complex(root)
        if not box.contains(root, margin=box.cell) or root.imag < -DEDUPLICATION_TOLERANCE:
            continue
        root, multiplicity = _polish_multiple(eq, root)
        if abs(root.imag) <= DEDUPLICATION_TOLERANCE:
            root = complex(root.real, 0.0)
        for entry in found:
            if abs(entry[0] - root) <= DEDUPLICATION_TOLERANCE:
                entry[1] = max(entry[1], multiplicity)
                break
        else:
            found.append([root, multiplicity])

    roots, multiplicities = [], []
    for root, multiplicity in found:
        for value in ([root] if root.imag == 0 else [root, root.conjugate()]):
            roots.extend([value] * multiplicity)
            multiplicities.extend([multiplicity] * multiplicity)

    order = sorted(range(len(roots)), key=lambda i: (-roots[i].real, -roots[i].imag))
    order = order[:count]
    roots = tuple(roots[i] for i in order)
    multiplicities = tuple(multiplicities[i] for i in order)
    residuals = tuple(float(abs(complex(eq(root)))) for root in roots)

    if len(roots) < count:
        message = f'{eq.kind}: found {len(roots)} of {count} requested roots in {box}'
        logger.warning(message)
        warnings.warn(message, PartialSpectrumWarning)
    logger.debug(f'{eq.kind} rightmost roots {roots}')
    return SpectrumResult(roots=roots, residuals=residuals, multiplicities=multiplicities, search_box=box)


def rightmost_real_part(eq: CharEq, box: SearchBox | None = None) -> float:
    """Real part of the rightmost root; negative iff the linearised system is stable."""
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', PartialSpectrumWarning)
        result = rightmost_roots(eq, count=1, box=box)
    return result.rightmost.real
