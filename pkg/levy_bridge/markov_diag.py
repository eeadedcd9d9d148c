"""
Module that provides the Bochner positive-definiteness diagnostics showing that the nonstationary
Cauchy-Schrodinger process is not Markov
"""

import logging
import math
from typing import Callable, Sequence

import numpy as np

from levy_bridge.exceptions import LevyBridgeError, LevyBridgeValidationError, PoleProximityError, WitnessNotFoundError
from levy_bridge.jumps import path_generator
from levy_bridge.schemas import PDWitness, RatioKernel, TwoPointViolation

logger = logging.getLogger(__name__)

POLE_THRESHOLD = 1e-12
NUMERATOR_THRESHOLD = 1e-6
VIOLATION_MARGIN = 1e-6
WITNESS_OFFSETS = (1e-2, 1e-3, 1e-4)
WITNESS_ZEROS = 5
ZERO_ULPS = 16


def _bracket(p, s: float):
    a = np.abs(p)
    return np.cos(s * a) + np.sin(s * a) / s


def _check_times(s: float, t: float):
    if not 0 < s < t:
        raise LevyBridgeValidationError(f"times must satisfy 0 < s < t: found s={s}, t={t}")


def h_ratio(p, s: float, t: float):
    """h(p,s,t) = [cos(t|p|) + sin(t|p|)/t] / [cos(s|p|) + sin(s|p|)/s]"""

    _check_times(s, t)
    denominator = _bracket(p, s)
    if np.any(np.abs(denominator) < POLE_THRESHOLD):
        raise PoleProximityError(f"h(p, {s}, {t}) evaluated within {POLE_THRESHOLD} of a denominator zero")
    value = _bracket(p, t) / denominator
    return float(value) if np.ndim(value) == 0 else value


def ratio_kernel(kernel: RatioKernel) -> Callable:
    """h(., s, t) as a one-argument function"""

    return lambda p: h_ratio(p, kernel.s, kernel.t)


def characteristic_multiplier(p, t: float):
    """[cos(t|p|) + sin(t|p|)/t] / (1 + |p|), a genuine characteristic function for every t > 0"""

    if not t > 0:
        raise LevyBridgeValidationError(f"t must be > 0: found {t}")
    return _bracket(p, t) / (1.0 + np.abs(p))


def denominator_zeros(s: float, count: int) -> list:
    """|p|_N = (arctan(1/s) + (2N+1) pi/2) / s for N = 0..count-1"""

    if not s > 0:
        raise LevyBridgeValidationError(f"s must be > 0: found {s}")
    if count < 1:
        raise LevyBridgeValidationError(f"count must be >= 1: found {count}")
    alpha = math.atan(1.0 / s)
    amplitude = math.sqrt(1.0 + 1.0 / (s * s))
    zeros = [(alpha + (2 * N + 1) * math.pi / 2.0) / s for N in range(count)]
    for zero in zeros:
        # s|p| carries a few ulps of rounding, scaled by the amplitude of the bracket
        bound = max(POLE_THRESHOLD, ZERO_ULPS * amplitude * math.ulp(s * zero))
        if abs(_bracket(zero, s)) >= bound:
            raise LevyBridgeError(f"zero {zero} leaves the denominator at {_bracket(zero, s)}")
    return zeros


def two_point_violation(p1: float, p2: float, s: float, t: float) -> TwoPointViolation:
    """M = h(p1 - p2, s, t) and the determinant 1 - M^2 of the 2x2 Bochner matrix"""

    if p1 == p2:
        raise LevyBridgeValidationError(f"p1 must differ from p2: found {p1}")
    M = h_ratio(p1 - p2, s, t)
    return TwoPointViolation(M=M, det=1.0 - M * M)


def pd_matrix_min_eigenvalue(h: Callable, points: Sequence[float]) -> float:
    """Smallest eigenvalue of the Hermitian matrix [h(p_i - p_j)]"""

    points = np.asarray(points, dtype=float)
    if not 2 <= points.size <= 16:
        raise LevyBridgeValidationError(f"number of points must lie in [2, 16]: found {points.size}")
    matrix = np.asarray(h(points[:, None] - points[None, :]), dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0])


def find_nonmarkov_witness(s: float, t: float, zeros: int = WITNESS_ZEROS) -> PDWitness:
    """Scans shrinking neighbourhoods of the first denominator zeros for |h| > 1"""

    _check_times(s, t)
    for index, zero in enumerate(denominator_zeros(s, zeros)):
        numerator = float(_bracket(zero, t))
        if abs(numerator) < NUMERATOR_THRESHOLD:
            logger.info("Skipping zero %d at |p|=%.10g: numerator %.3e also vanishes", index, zero, numerator)
            continue
        found = None
        for offset in WITNESS_OFFSETS:
            for side in (-1.0, 1.0):
                p = zero + side * offset
                M = h_ratio(p, s, t)
                if abs(M) > 1.0 + VIOLATION_MARGIN:
                    found = (p, M, offset)
                    break
        if found is None:
            logger.info("No violation near zero %d at |p|=%.10g", index, zero)
            continue
        p, M, offset = found
        eigenvalue = pd_matrix_min_eigenvalue(lambda q: h_ratio(q, s, t), [p, 0.0])
        logger.info("Witness at zero %d: p=%.10g, M=%.6g, min eigenvalue %.6g", index, p, M, eigenvalue)
        return PDWitness(p1=p, p2=0.0, s=s, t=t, M=M, min_eigenvalue=eigenvalue, zero_index=index, offset=offset)
    raise WitnessNotFoundError(f"No violation found near the first {zeros} denominator zeros for s={s}, t={t}")


def h_profile(s: float, t: float, p_min: float, p_max: float, n: int = 1001):
    """Samples h on [p_min, p_max], dropping points within the pole threshold"""

    _check_times(s, t)
    if not p_max > p_min:
        raise LevyBridgeValidationError(f"p_max must be > p_min: found [{p_min}, {p_max}]")
    p = np.linspace(p_min, p_max, n)
    denominator = _bracket(p, s)
    keep = np.abs(denominator) >= POLE_THRESHOLD
    return p[keep], _bracket(p[keep], t) / denominator[keep]


def random_pd_trials(h: Callable, trials: int = 100, max_points: int = 8, spread: float = 20.0, seed: int = 0) -> float:
    """Smallest Bochner eigenvalue over random point sets of 2..max_points points in [-spread, spread]"""

    if trials < 1:
        raise LevyBridgeValidationError(f"trials must be >= 1: found {trials}")
    if not 2 <= max_points <= 16:
        raise LevyBridgeValidationError(f"max_points must lie in [2, 16]: found {max_points}")
    worst = math.inf
    for trial in range(trials):
        rng = path_generator(seed, trial)
        points = rng.uniform(-spread, spread, int(rng.integers(2, max_points + 1)))
        worst = min(worst, pd_matrix_min_eigenvalue(h, points))
    logger.debug("Smallest eigenvalue over %d random Bochner matrices: %.3e", trials, worst)
    return worst
