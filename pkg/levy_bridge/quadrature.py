"""
Module that provides symmetric-pair quadrature of Levy jump integrals on periodic grids
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from levy_bridge.exceptions import LevyBridgeValidationError
from levy_bridge.schemas import CauchyNoise, Grid1D, NoiseKind, relativistic_levy_density

logger = logging.getLogger(__name__)

GAUSS_ORDER = 8
UNIFORM_PANEL = 0.25
UNIFORM_REACH = 64.0
OUTER_RATIO = 1.25


def require_pure_jump(kind: NoiseKind):
    """Rejects noise kinds without a Levy measure"""

    if not kind.pure_jump:
        raise LevyBridgeValidationError(f"kind must be pure-jump: found {kind.family}")


def small_jump_moment(kind: NoiseKind, eps: float) -> float:
    """Second moment of the Levy measure over |y| <= eps"""

    require_pure_jump(kind)
    if isinstance(kind, CauchyNoise):
        return 2.0 * eps / math.pi
    value, _ = integrate.quad(lambda y: y * y * kind.levy_density(y), 0.0, eps, epsabs=1e-15, epsrel=1e-12)
    return 2.0 * value


def periodized_levy_density(kind: NoiseKind, y, period: float):
    """Sum of the Levy density over all translates y + k*period"""

    require_pure_jump(kind)
    if isinstance(kind, CauchyNoise):
        return math.pi / (period**2 * np.square(np.sin(math.pi * np.asarray(y) / period)))
    images = math.ceil(40.0 / (kind.m * period)) + 1
    return sum(relativistic_levy_density(np.asarray(y) + k * period, kind.m) for k in range(-images, images + 1))


def panel_edges(eps: float, reach: float) -> np.ndarray:
    """Geometric panels up to 1, uniform panels up to UNIFORM_REACH, geometric panels beyond"""

    edges = [eps]
    inner = min(1.0, reach)
    if eps < inner:
        count = max(1, math.ceil(math.log2(inner / eps)))
        edges.extend(np.geomspace(eps, inner, count + 1)[1:])
    near = min(UNIFORM_REACH, reach)
    if near > edges[-1]:
        count = math.ceil((near - edges[-1]) / UNIFORM_PANEL)
        edges.extend(np.linspace(edges[-1], near, count + 1)[1:])
    if reach > edges[-1]:
        count = math.ceil(math.log(reach / edges[-1]) / math.log(OUTER_RATIO))
        edges.extend(np.geomspace(edges[-1], reach, count + 1)[1:])
    return np.asarray(edges)


class LevyQuadrature:
    """Quadrature of integrals over |y| > eps against the periodized Levy measure of a grid.

    Integrands are evaluated in pairs J(y) + J(-y), which removes the odd compensator term,
    and the jumps |y| <= eps are replaced by the Taylor surrogate J''(0)/2 * int y^2 nu(dy),
    with J''(0) estimated by a second difference at step eps. Every integrand must vanish at y = 0.
    """

    def __init__(self, kind: NoiseKind, eps: float, grid: Grid1D, mask: Optional[np.ndarray] = None):
        require_pure_jump(kind)
        if not eps > 0:
            raise LevyBridgeValidationError(f"eps must be > 0: found {eps}")
        reach = grid.length / 2.0
        if eps >= reach:
            raise LevyBridgeValidationError(f"eps must be < half the domain length: found {eps}")

        edges = panel_edges(eps, reach)
        nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)
        lower, upper = edges[:-1, None], edges[1:, None]
        self.nodes = (0.5 * (upper - lower) * nodes + 0.5 * (upper + lower)).ravel()
        self.weights = (0.5 * (upper - lower) * weights).ravel() * periodized_levy_density(
            kind, self.nodes, grid.length
        )
        self.kind = kind
        self.eps = eps
        self.grid = grid
        self.mask = mask
        self.moment = small_jump_moment(kind, eps)
        logger.debug("Levy quadrature with %d nodes on %d panels, eps=%g", self.nodes.size, edges.size - 1, eps)

    def shifter(self, samples: np.ndarray) -> Callable[[float], np.ndarray]:
        """Band-limited translation y -> samples(x + y), restricted to the mask"""

        spectrum = np.fft.fft(samples, axis=-1)
        p = self.grid.p

        def shifted(y: float) -> np.ndarray:
            values = np.fft.ifft(spectrum * np.exp(1j * p * y), axis=-1)
            return values if self.mask is None else values[..., self.mask]

        return shifted

    def restrict(self, samples: np.ndarray) -> np.ndarray:
        return samples if self.mask is None else samples[..., self.mask]

    def integrate(self, integrand: Callable[[float], np.ndarray]) -> np.ndarray:
        """int_{y != 0} J(y) nu(dy) for an integrand with J(0) = 0"""

        total = None
        for y, w in zip(self.nodes, self.weights):
            term = w * (integrand(y) + integrand(-y))
            total = term if total is None else total + term
        h = self.eps
        return total + self.moment * (integrand(h) + integrand(-h)) / (2.0 * h * h)
