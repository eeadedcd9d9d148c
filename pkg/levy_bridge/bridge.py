"""
Module that provides the Schrodinger marginal solver, bridge interpolations and Gaussian reference solutions
"""

import logging
import math
from typing import Optional, Union

import numpy as np
from scipy import signal

from levy_bridge.common import GaussianSelector
from levy_bridge.exceptions import DegenerateMarginalError, LevyBridgeValidationError, NonConvergenceError
from levy_bridge.kernels import bernstein_closed_form
from levy_bridge.schemas import (
    BernsteinParams,
    BridgeProblem,
    BridgeSolution,
    ComplexField,
    GaussianBridgeParams,
    GaussianPacketParams,
    Grid1D,
    HeatKernel,
    KernelKind,
    MadelungPair,
    RealField,
    ThetaPair,
)
from levy_bridge.spectral import derivative

logger = logging.getLogger(__name__)

DENSE_LIMIT = 4096
SUPPORT_FLOOR = 1e-300


class KernelOperator:
    """Discretized kernel K_ij = k_tau(x_j - x_i) dx, dense for small grids and FFT-applied otherwise"""

    def __init__(self, kind: KernelKind, tau: float, grid: Grid1D, dense: Optional[bool] = None):
        if not tau > 0:
            raise LevyBridgeValidationError(f"tau must be > 0: found {tau}")
        self.grid = grid
        self.dense = grid.n <= DENSE_LIMIT if dense is None else dense
        lags = grid.dx * np.arange(-(grid.n - 1), grid.n)
        self.profile = kind.density(lags, tau) * grid.dx
        if self.dense:
            index = np.arange(grid.n)
            self.matrix = self.profile[(index[None, :] - index[:, None]) + grid.n - 1]

    def apply(self, v: np.ndarray) -> np.ndarray:
        """(K v)_i = sum_j K_ij v_j"""

        if self.dense:
            return self.matrix @ v
        n = self.grid.n
        return signal.fftconvolve(v, self.profile[::-1], mode="full")[n - 1 : 2 * n - 1]

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        """(K^T v)_j = sum_i K_ij v_i"""

        if self.dense:
            return self.matrix.T @ v
        n = self.grid.n
        return signal.fftconvolve(v, self.profile, mode="full")[n - 1 : 2 * n - 1]


def solve_marginal_system(
    problem: BridgeProblem, tol: float = 1e-10, max_iter: int = 10000, dense: Optional[bool] = None
) -> BridgeSolution:
    """Iterative proportional fitting of f(x) k(x,t1,y,t2) g(y) to the two marginals"""

    if not tol > 0:
        raise LevyBridgeValidationError(f"tol must be > 0: found {tol}")
    if max_iter < 1:
        raise LevyBridgeValidationError(f"max_iter must be >= 1: found {max_iter}")

    grid = problem.grid
    dx = grid.dx
    kernel = KernelOperator(problem.kind, problem.t2 - problem.t1, grid, dense)
    rho1, rho2 = problem.rho1.samples, problem.rho2.samples
    support1, support2 = rho1 > SUPPORT_FLOOR, rho2 > SUPPORT_FLOOR

    f = np.where(support1, 1.0, 0.0)
    g = np.zeros(grid.n)
    history = []
    residual = math.inf
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        backward = kernel.apply_transpose(f)
        if np.any(backward[support2] <= 0):
            raise DegenerateMarginalError("rho2 has mass where the propagated f vanishes")
        g = np.where(support2, rho2 / np.where(support2, backward, 1.0), 0.0)
        forward = kernel.apply(g)
        if np.any(forward[support1] <= 0):
            raise DegenerateMarginalError("rho1 has mass where the propagated g vanishes")
        f = np.where(support1, rho1 / np.where(support1, forward, 1.0), 0.0)

        first = dx * np.sum(np.abs(f * kernel.apply(g) - rho1))
        second = dx * np.sum(np.abs(g * kernel.apply_transpose(f) - rho2))
        residual = max(first, second)
        history.append(residual)
        if residual <= tol:
            break

    logger.info("Marginal system: residual %.3e after %d iterations", residual, iterations)
    if residual > tol:
        raise NonConvergenceError(f"Residual {residual:.3e} > tol {tol:.3e} after {max_iter} iterations")

    scale = dx * np.sum(f)
    return BridgeSolution(
        f=RealField(grid=grid, samples=f / scale),
        g=RealField(grid=grid, samples=g * scale),
        residual=residual,
        iterations=iterations,
        residual_history=history,
    )


class BridgeInterpolation:
    """theta, theta*, interpolating densities and transition densities of a solved bridge"""

    def __init__(self, problem: BridgeProblem, solution: BridgeSolution):
        self.problem = problem
        self.solution = solution
        self.grid = problem.grid

    def _check_time(self, t: float):
        if not self.problem.t1 <= t <= self.problem.t2:
            raise LevyBridgeValidationError(f"t must lie in [{self.problem.t1}, {self.problem.t2}]: found {t}")

    def theta(self, x, t: float) -> np.ndarray:
        """theta(x, t) = int k(x,t,z,t2) g(z) dz"""

        self._check_time(t)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        z, g = self.grid.x, self.solution.g.samples
        if t == self.problem.t2:
            return np.interp(x, z, g)
        weights = self.problem.kind.density(z[None, :] - x[:, None], self.problem.t2 - t)
        return self.grid.dx * weights @ g

    def theta_star(self, x, t: float) -> np.ndarray:
        """theta*(x, t) = int f(z) k(z,t1,x,t) dz"""

        self._check_time(t)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        z, f = self.grid.x, self.solution.f.samples
        if t == self.problem.t1:
            return np.interp(x, z, f)
        weights = self.problem.kind.density(x[:, None] - z[None, :], t - self.problem.t1)
        return self.grid.dx * weights @ f

    def density(self, t: float) -> RealField:
        return propagate_thetas(self.solution, self.problem, t).density()

    def transition_density(self, y, s: float, x, t: float) -> np.ndarray:
        """p(y,s,x,t) = k(y,s,x,t) theta(x,t) / theta(y,s) on the outer product of y and x"""

        if not self.problem.t1 <= s < t <= self.problem.t2:
            raise LevyBridgeValidationError(f"times must satisfy t1 <= s < t <= t2: found s={s}, t={t}")
        y = np.atleast_1d(np.asarray(y, dtype=float))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        kernel = self.problem.kind.density(x[None, :] - y[:, None], t - s)
        return kernel * self.theta(x, t)[None, :] / self.theta(y, s)[:, None]

    def transport(self, s: float, t: float) -> RealField:
        """int rho(y, s) p(y,s,x,t) dy on the grid"""

        x = self.grid.x
        matrix = self.transition_density(x, s, x, t)
        return RealField(grid=self.grid, samples=self.grid.dx * self.density(s).samples @ matrix)

    def chapman_kolmogorov_residual(self, s: float, u: float, t: float, window: Optional[float] = None) -> float:
        """max |p(y,s,x,t) - int p(y,s,z,u) p(z,u,x,t) dz| over grid pairs with |y|, |x| <= window;
        z runs over the whole grid"""

        if not s < u < t:
            raise LevyBridgeValidationError(f"times must satisfy s < u < t: found s={s}, u={u}, t={t}")
        z = self.grid.x
        x = z if window is None else z[np.abs(z) <= window]
        direct = self.transition_density(x, s, x, t)
        composed = self.grid.dx * self.transition_density(x, s, z, u) @ self.transition_density(z, u, x, t)
        return float(np.max(np.abs(direct - composed)))


def propagate_thetas(solution: BridgeSolution, problem: BridgeProblem, t: float) -> ThetaPair:
    """theta*(., t) forward from f and theta(., t) backward from g"""

    if not problem.t1 <= t <= problem.t2:
        raise LevyBridgeValidationError(f"t must lie in [{problem.t1}, {problem.t2}]: found {t}")
    grid = problem.grid
    if t == problem.t1:
        theta_star = solution.f.samples
    else:
        theta_star = KernelOperator(problem.kind, t - problem.t1, grid).apply_transpose(solution.f.samples)
    if t == problem.t2:
        theta = solution.g.samples
    else:
        theta = KernelOperator(problem.kind, problem.t2 - t, grid).apply(solution.g.samples)
    return ThetaPair(
        theta=RealField(grid=grid, samples=theta), theta_star=RealField(grid=grid, samples=theta_star), t=t
    )


def forward_drift(theta: RealField, D: float) -> RealField:
    """b = 2D d/dx ln theta for the heat-kernel bridge"""

    if not D > 0:
        raise LevyBridgeValidationError(f"D must be > 0: found {D}")
    slope = derivative(theta).samples.real
    return theta.with_samples(2.0 * D * slope / theta.samples)


def bernstein_transport_defect(params: BernsteinParams, s: float, t: float, grid: Grid1D) -> float:
    """L1 distance between int rho(y,s) p(y,s,x,t) dy and rho(x,t), p = k(y,s,x,t) theta(x,t) / theta(y,s)"""

    if not -params.alpha0 < s < t < params.alpha0:
        raise LevyBridgeValidationError(f"times must satisfy -alpha0 < s < t < alpha0: found s={s}, t={t}")
    x = grid.x
    heat = HeatKernel(D=params.D)
    theta_s, theta_t = heat.density(x, params.alpha0 - s), heat.density(x, params.alpha0 - t)
    transition = heat.density(x[None, :] - x[:, None], t - s) * theta_t[None, :] / theta_s[:, None]
    moved = grid.dx * bernstein_closed_form(x, s, params) @ transition
    return float(grid.dx * np.sum(np.abs(moved - bernstein_closed_form(x, t, params))))


def bernstein_drift_residual(
    params: BernsteinParams, t: float, grid: Grid1D, dt: float = 1e-4, window: float = 5.0
) -> float:
    """max |d/dt rho - D rho'' + (b rho)'| on |x| <= window for the Bernstein bridge"""

    if not abs(t) + dt < params.alpha0:
        raise LevyBridgeValidationError(f"|t| + dt must be < alpha0: found t={t}, dt={dt}")
    x = grid.x
    heat = HeatKernel(D=params.D)
    rho = RealField(grid=grid, samples=bernstein_closed_form(x, t, params))
    theta = RealField(grid=grid, samples=heat.density(x, params.alpha0 - t))
    drift = forward_drift(theta, params.D)
    time_derivative = (bernstein_closed_form(x, t + dt, params) - bernstein_closed_form(x, t - dt, params)) / (2.0 * dt)
    diffusion = params.D * derivative(rho, 2).samples.real
    transport = derivative(rho.with_samples(drift.samples * rho.samples)).samples.real
    residual = np.abs(time_derivative - diffusion + transport)
    return float(np.max(residual[np.abs(x) <= window]))


# Gaussian reference solutions


def free_packet(x, t: float, params: GaussianPacketParams) -> np.ndarray:
    """psi(x,t) = (a^2/pi)^(1/4) (a^2 + 2iDt)^(-1/2) exp(-x^2/(2(a^2 + 2iDt)))"""

    width = params.alpha2 + 2j * params.D * t
    return (params.alpha2 / math.pi) ** 0.25 / np.sqrt(width) * np.exp(-np.square(x) / (2.0 * width))


def free_density(x, t: float, params: GaussianPacketParams) -> np.ndarray:
    """|psi(x,t)|^2 = a [pi(a^4 + 4D^2t^2)]^(-1/2) exp(-x^2 a^2/(a^4 + 4D^2t^2))"""

    spread = params.alpha2**2 + 4.0 * params.D**2 * t**2
    return math.sqrt(params.alpha2 / (math.pi * spread)) * np.exp(-np.square(x) * params.alpha2 / spread)


def nelson_coefficient(s: float, t: float) -> float:
    """c(s,t) = [((1-t)^2 + 2s)/(1+s^2)]^(1/2) for a^2 = 2, D = 1"""

    return math.sqrt(((1.0 - t) ** 2 + 2.0 * s) / (1.0 + s * s))


def nelson_transition(y: float, s: float, x, t: float, params: GaussianPacketParams) -> np.ndarray:
    """Transition density of the Nelson diffusion of the free packet"""

    if not t > s >= 0:
        raise LevyBridgeValidationError(f"times must satisfy 0 <= s < t: found s={s}, t={t}")
    D = params.D
    if s == 0:
        mean = y * (1.0 - 2.0 * D * t / params.alpha2)
    else:
        if params.alpha2 != 2.0 or D != 1.0:
            raise LevyBridgeValidationError("intermediate-time transitions require alpha2 = 2 and D = 1")
        mean = nelson_coefficient(s, t) * y
    spread = 4.0 * D * (t - s)
    return np.exp(-np.square(np.asarray(x) - mean) / spread) / math.sqrt(math.pi * spread)


def madelung_exponents(x, t: float, params: GaussianPacketParams):
    """R and S of the free packet"""

    a2, D = params.alpha2, params.D
    spread = a2**2 + 4.0 * D**2 * t**2
    x2 = np.square(x)
    R = 0.25 * math.log(a2 / math.pi) - 0.25 * math.log(spread) - a2 * x2 / (2.0 * spread)
    S = -0.5 * math.atan(2.0 * D * t / a2) + D * t * x2 / spread
    return R, S


def _check_theta_time(t: float, params: GaussianPacketParams):
    if not abs(t) < params.alpha2 / (2.0 * params.D):
        raise LevyBridgeValidationError(f"|t| must be < alpha2/(2D) = {params.alpha2 / (2.0 * params.D)}: found {t}")


def forward_theta(x, t: float, params: GaussianPacketParams) -> np.ndarray:
    """theta*(x,t) = psi(x, -it), solving d/dt theta* = D theta*''"""

    _check_theta_time(t, params)
    width = params.alpha2 + 2.0 * params.D * t
    return (params.alpha2 / math.pi) ** 0.25 / math.sqrt(width) * np.exp(-np.square(x) / (2.0 * width))


def backward_theta(x, t: float, params: GaussianPacketParams) -> np.ndarray:
    """theta(x,t), solving d/dt theta = -D theta''"""

    _check_theta_time(t, params)
    width = params.alpha2 - 2.0 * params.D * t
    return (params.alpha2 / math.pi) ** 0.25 / math.sqrt(width) * np.exp(-np.square(x) / (2.0 * width))


def gaussian_bridge_variance(t: float, params: GaussianBridgeParams) -> float:
    """Variance at time t in [0, tau] of the heat-kernel bridge between N(0, var1) and N(0, var2)"""

    if not 0 <= t <= params.tau:
        raise LevyBridgeValidationError(f"t must lie in [0, {params.tau}]: found {t}")
    k = 2.0 * params.D * params.tau
    c = (params.var1 - params.var2) / k
    if not c * c < 1:
        raise LevyBridgeValidationError(f"|var1 - var2| must be < 2 D tau: found {abs(params.var1 - params.var2)}")
    total = params.var1 + params.var2
    u = (total + math.sqrt(total**2 + (1.0 - c * c) * k * k)) / (1.0 - c * c)
    a = (u - k + c * u) / 2.0
    b = (u - k - c * u) / 2.0
    if not (a > 0 and b > 0):
        raise LevyBridgeValidationError("marginals admit no Gaussian factorization")
    return (a + 2.0 * params.D * t) * (b + 2.0 * params.D * (params.tau - t)) / (a + b + k)


def gaussian_bridge_problem(params: GaussianBridgeParams, grid: Grid1D, t1: float = 0.0) -> BridgeProblem:
    """Heat-kernel marginal problem between N(0, var1) at t1 and N(0, var2) at t1 + tau"""

    x = grid.x

    def normal(variance: float) -> RealField:
        density = np.exp(-np.square(x) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
        return RealField(grid=grid, samples=density)

    return BridgeProblem(
        rho1=normal(params.var1), rho2=normal(params.var2), t1=t1, t2=t1 + params.tau, kind=HeatKernel(D=params.D)
    )


def bernstein_bridge_problem(params: BernsteinParams, s: float, grid: Grid1D) -> BridgeProblem:
    """Heat-kernel marginal problem between the Bernstein densities at -s and s"""

    if not 0 < s < params.alpha0:
        raise LevyBridgeValidationError(f"s must satisfy 0 < s < alpha0: found {s}")
    return BridgeProblem(
        rho1=RealField(grid=grid, samples=bernstein_closed_form(grid.x, -s, params)),
        rho2=RealField(grid=grid, samples=bernstein_closed_form(grid.x, s, params)),
        t1=-s,
        t2=s,
        kind=HeatKernel(D=params.D),
    )


def gaussian_reference(
    selector: GaussianSelector,
    grid: Grid1D,
    t: float,
    params: Union[GaussianPacketParams, BernsteinParams, GaussianBridgeParams, None] = None,
    y: float = 0.0,
    s: float = 0.0,
) -> Union[RealField, ComplexField, MadelungPair]:
    """Named closed-form Gaussian solution sampled on a grid"""

    x = grid.x
    if selector == GaussianSelector.BERNSTEIN_DENSITY:
        params = params or BernsteinParams()
        return RealField(grid=grid, samples=bernstein_closed_form(x, t, params))
    if selector == GaussianSelector.GAUSSIAN_BRIDGE:
        if not isinstance(params, GaussianBridgeParams):
            raise LevyBridgeValidationError("gaussian_bridge requires GaussianBridgeParams")
        variance = gaussian_bridge_variance(t, params)
        density = np.exp(-np.square(x) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
        return RealField(grid=grid, samples=density)

    params = params or GaussianPacketParams()
    if not isinstance(params, GaussianPacketParams):
        raise LevyBridgeValidationError(f"{selector.value} requires GaussianPacketParams")
    if selector == GaussianSelector.FREE_PACKET:
        return ComplexField(grid=grid, samples=free_packet(x, t, params))
    if selector == GaussianSelector.FREE_DENSITY:
        return RealField(grid=grid, samples=free_density(x, t, params))
    if selector == GaussianSelector.NELSON_TRANSITION:
        return RealField(grid=grid, samples=nelson_transition(y, s, x, t, params))
    if selector == GaussianSelector.MADELUNG_EXPONENTS:
        R, S = madelung_exponents(x, t, params)
        return MadelungPair(R=RealField(grid=grid, samples=R), S=RealField(grid=grid, samples=S))
    if selector == GaussianSelector.FORWARD_THETA:
        return RealField(grid=grid, samples=forward_theta(x, t, params))
    return RealField(grid=grid, samples=backward_theta(x, t, params))
