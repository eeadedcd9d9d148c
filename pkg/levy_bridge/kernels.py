"""
Module that provides closed-form semigroup kernels and the Cauchy unitary transition kernel
"""

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate, interpolate, signal, special

from levy_bridge.exceptions import LevyBridgeValidationError, SingularPointError
from levy_bridge.schemas import BernsteinParams, Grid1D, HeatKernel, KernelKind, RealField

logger = logging.getLogger(__name__)

G_TABLE_SIZE = 2**20
G_MOMENTUM_CUTOFF = 2000.0
CK_PADDING = 400.0


def kernel_eval(kind: KernelKind, y: float, s: float, x: float, t: float) -> float:
    """k(y, s, x, t) = k_{t-s}(x - y)"""

    if not t > s:
        raise LevyBridgeValidationError(f"t must be > s: found s={s}, t={t}")
    return float(kind.density(x - y, t - s))


def kernel_field(kind: KernelKind, tau: float, grid: Grid1D, center: float = 0.0) -> RealField:
    """k_tau(x - center) sampled on a grid"""

    if not tau > 0:
        raise LevyBridgeValidationError(f"tau must be > 0: found {tau}")
    return RealField.from_function(grid, lambda x: kind.density(x - center, tau))


def kernel_mass(kind: KernelKind, tau: float) -> float:
    """Whole-line integral of k_tau"""

    if not tau > 0:
        raise LevyBridgeValidationError(f"tau must be > 0: found {tau}")
    value, _ = integrate.quad(lambda r: kind.density(r, tau), -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value


def wrapped_cauchy_kernel(tau: float, grid: Grid1D, center: float = 0.0) -> RealField:
    """Cauchy kernel summed over all periodic images of the grid"""

    u = 2.0 * math.pi * (grid.x - center) / grid.length
    samples = math.sinh(2.0 * math.pi * tau / grid.length) / (
        grid.length * (math.cosh(2.0 * math.pi * tau / grid.length) - np.cos(u))
    )
    return RealField(grid=grid, samples=samples)


# Bessel K1


def bessel_k1(z):
    """Modified Bessel function of the third kind, order one"""

    values = np.asarray(z, dtype=float)
    if np.any(~(values > 0)):
        raise LevyBridgeValidationError(f"z must be > 0: found {z}")
    result = special.k1(values)
    return float(result) if result.ndim == 0 else result


def k1_series(z: float, terms: int = 40) -> float:
    """Small-argument expansion K1(z) = 1/z + ln(z/2) I1(z) - (z/4) sum [psi(k+1) + psi(k+2)] (z^2/4)^k / (k!(k+1)!)"""

    quarter = z * z / 4.0
    total = 0.0
    for k in range(terms):
        weight = math.factorial(k) * math.factorial(k + 1)
        total += (special.digamma(k + 1) + special.digamma(k + 2)) * quarter**k / weight
    return 1.0 / z + math.log(z / 2.0) * special.i1(z) - z / 4.0 * total


def k1_asymptotic(z: float) -> float:
    """Large-argument expansion, truncated at its smallest term"""

    total, term, k = 1.0, 1.0, 1
    while True:
        factor = (4.0 - (2 * k - 1) ** 2) / (k * 8.0 * z)
        following = term * factor
        if abs(following) >= abs(term) or k > 60:
            break
        term = following
        total += term
        k += 1
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def k1_integral(z: float) -> float:
    """K1(z) = int_0^inf exp(-z cosh u) cosh u du"""

    upper = math.acosh(1.0 + 60.0 / z)
    value, _ = integrate.quad(
        lambda u: math.exp(-z * math.cosh(u)) * math.cosh(u), 0.0, upper, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return value


# Chapman-Kolmogorov and Bernstein densities


def chapman_kolmogorov_residual(kind: KernelKind, s: float, u: float, t: float, grid: Optional[Grid1D] = None) -> float:
    """max over grid pairs (y, x) of |k(y,s,x,t) - int k(y,s,z,u) k(z,u,x,t) dz|"""

    if not s < u < t:
        raise LevyBridgeValidationError(f"times must satisfy s < u < t: found s={s}, u={u}, t={t}")
    grid = grid or Grid1D.symmetric(10.0, 512)
    dx = grid.dx
    half = math.ceil((grid.length + CK_PADDING) / dx)
    z = dx * np.arange(-half, half + 1)
    convolved = dx * signal.fftconvolve(kind.density(z, u - s), kind.density(z, t - u), mode="full")
    lags = np.arange(-(grid.n - 1), grid.n)
    centre = 2 * half
    residual = np.abs(kind.density(lags * dx, t - s) - convolved[centre + lags])
    return float(np.max(residual))


def bernstein_density(x, t: float, params: BernsteinParams):
    """k(0,-a0,x,t) k(x,t,0,a0) / k(0,-a0,0,a0) for the heat kernel with coefficient D"""

    if not abs(t) < params.alpha0:
        raise LevyBridgeValidationError(f"|t| must be < alpha0: found t={t}, alpha0={params.alpha0}")
    heat = HeatKernel(D=params.D)
    x = np.asarray(x, dtype=float)
    forward = heat.density(x, t + params.alpha0)
    backward = heat.density(x, params.alpha0 - t)
    return forward * backward / heat.density(0.0, 2.0 * params.alpha0)


def bernstein_closed_form(x, t: float, params: BernsteinParams):
    """[a^2/(pi(a^4 - 4D^2t^2))]^(1/2) exp[-a^2 x^2/(a^4 - 4D^2t^2)] with a^2 = 2 D alpha0"""

    if not abs(t) < params.alpha0:
        raise LevyBridgeValidationError(f"|t| must be < alpha0: found t={t}, alpha0={params.alpha0}")
    alpha2 = 2.0 * params.D * params.alpha0
    spread = alpha2**2 - 4.0 * params.D**2 * t**2
    return np.sqrt(alpha2 / (math.pi * spread)) * np.exp(-alpha2 * np.square(x) / spread)


# Cauchy unitary transition kernel


def g_exact(u):
    """(1/pi) int_0^inf cos(pu)/(1+p) dp through the sine and cosine integrals"""

    a = np.abs(np.asarray(u, dtype=float))
    si, ci = special.sici(a)
    return (-ci * np.cos(a) - (si - math.pi / 2.0) * np.sin(a)) / math.pi


class CauchyGTable:
    """The density g with characteristic function 1/(1+|p|), by FFT inversion on a fine periodic grid,
    together with its cumulative integral G(x) = int_0^x g"""

    def __init__(self, size: int = G_TABLE_SIZE, cutoff: float = G_MOMENTUM_CUTOFF):
        dx = 0.5 / math.ceil(0.5 * cutoff / math.pi)
        self.grid = Grid1D(x_min=-(size // 2) * dx, x_max=(size // 2) * dx, n=size)
        periodic = np.fft.ifft(1.0 / (1.0 + np.abs(self.grid.p))).real / dx
        centred = np.fft.fftshift(periodic)
        mirrored = np.empty_like(centred)
        mirrored[0] = centred[0]
        mirrored[1:] = centred[1:][::-1]
        self.g = RealField(grid=self.grid, samples=0.5 * (centred + mirrored))
        cumulative = integrate.cumulative_trapezoid(self.g.samples, dx=dx, initial=0.0)
        self.G = cumulative - cumulative[size // 2]
        self.origin = size // 2
        self._spline = None
        logger.info("Built g table with n=%d, dx=%.6g, momentum cutoff %.1f", size, dx, math.pi / dx)

    @property
    def dx(self) -> float:
        return self.grid.dx

    def steps(self, t: float) -> int:
        """Number of grid steps spanning t; t must be a multiple of the spacing"""

        k = round(t / self.dx)
        if abs(k * self.dx - t) > 1e-9 * max(1.0, t):
            raise LevyBridgeValidationError(f"t must be a multiple of the table spacing {self.dx}: found {t}")
        return k

    def g_at(self, u):
        """Pointwise g: exact near the logarithmic singularity, spline of the regular part elsewhere"""

        if self._spline is None:
            x = self.grid.x
            regular = self.g.samples + np.log(np.where(x == 0.0, 1.0, np.abs(x))) / math.pi
            keep = np.abs(x) >= 16 * self.dx
            self._spline = interpolate.CubicSpline(x[keep], regular[keep])
        u = np.asarray(u, dtype=float)
        near = np.abs(u) < 32 * self.dx
        safe = np.where(near, 1.0, np.abs(u))
        return np.where(near, g_exact(np.where(near, u, 1.0)), self._spline(u) - np.log(safe) / math.pi)

    def G_at(self, u):
        """Pointwise cumulative integral, odd in u"""

        u = np.asarray(u, dtype=float)
        return np.interp(u, self.grid.x, self.G)


@lru_cache
def g_table() -> CauchyGTable:
    """Shared g table"""

    return CauchyGTable()


class UnitaryTransitionKernel:
    """p(x,t) = 1/2[g(x+t) + g(x-t)] + chi_[-t,t](x)/(2t) - (G(x+t) - G(x-t))/(2t)"""

    def __init__(self, t: float, table: Optional[CauchyGTable] = None):
        if not t > 0:
            raise LevyBridgeValidationError(f"t must be > 0: found {t}")
        self.t = t
        self.table = table or g_table()

    @property
    def g_samples(self) -> RealField:
        return self.table.g

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(np.isclose(np.abs(x), self.t, rtol=0.0, atol=1e-12)):
            raise SingularPointError(f"p(x, t) is singular at x = +-{self.t}")
        t, table = self.t, self.table
        box = (np.abs(x) < t).astype(float) / (2.0 * t)
        smeared = (table.G_at(x + t) - table.G_at(x - t)) / (2.0 * t)
        return 0.5 * (table.g_at(x + t) + table.g_at(x - t)) + box - smeared

    def singular_cells(self) -> np.ndarray:
        k = self.table.steps(self.t)
        return np.array([self.table.origin - k, self.table.origin + k])

    def cell_average(self) -> float:
        """Average of p over a cell centred on x = t (equal at x = -t by symmetry)"""

        t, dx = self.t, self.table.dx
        half = dx / 2.0
        log_part, _ = integrate.quad(g_exact, 0.0, half, epsabs=1e-14, epsrel=1e-12, limit=200)
        smeared, _ = integrate.quad(g_exact, 0.0, 2.0 * t, points=[half], epsabs=1e-14, epsrel=1e-12, limit=400)
        return 0.5 * (2.0 * log_part / dx) + 0.5 * float(g_exact(2.0 * t)) + 0.5 / (2.0 * t) - smeared / (2.0 * t)

    def table_field(self) -> RealField:
        """p(x,t) on the g-table grid; singular cells carry their cell averages"""

        table = self.table
        k = table.steps(self.t)
        g, G, n = table.g.samples, table.G, table.grid.n
        index = np.arange(n)
        ahead, behind = np.clip(index + k, 0, n - 1), np.clip(index - k, 0, n - 1)
        x = table.grid.x
        box = np.where(np.abs(x) < self.t, 1.0, 0.0)
        box[[table.origin - k, table.origin + k]] = 0.5
        average = 0.5 * (np.roll(g, -k) + np.roll(g, k))
        samples = average + box / (2.0 * self.t) - (G[ahead] - G[behind]) / (2.0 * self.t)
        samples[self.singular_cells()] = self.cell_average()
        return RealField(grid=table.grid, samples=samples)

    def moments(self, reach: Optional[float] = None) -> dict:
        """Mass, mean and second moment; the second moment adds the tail 4t^2/(pi X) beyond |x| = X"""

        field = self.table_field()
        x, dx = field.grid.x, field.grid.dx
        reach = reach or field.grid.length / 4.0
        inside = np.abs(x) <= reach
        p = field.samples
        return {
            "mass": float(dx * np.sum(p)),
            "mean": float(dx * np.sum(x * p)),
            "second_moment": float(dx * np.sum(np.square(x[inside]) * p[inside]) + 4.0 * self.t**2 / (math.pi * reach)),
        }


def cauchy_unitary_transition(x: float, t: float) -> float:
    """p(x, t) of the unitary Cauchy evolution at a single point"""

    return float(UnitaryTransitionKernel(t)(x))
