"""
Module that provides pseudodifferential Schrodinger dynamics: the explicit Cauchy solution, Madelung exponents,
quantum potentials and wave-equation residuals
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import signal

from levy_bridge.bridge import madelung_exponents
from levy_bridge.exceptions import LevyBridgeValidationError, NodalRegionError
from levy_bridge.kernels import UnitaryTransitionKernel
from levy_bridge.quadrature import LevyQuadrature
from levy_bridge.schemas import (
    BorelInterval,
    CauchyNoise,
    ComplexField,
    DensityField,
    GaussianNoise,
    GaussianPacketParams,
    Grid1D,
    MadelungPair,
    MadelungResidualReport,
    NoiseKind,
    QuantumPotentialField,
    RealField,
    WaveResidualReport,
)
from levy_bridge.spectral import apply_generator_spectral, apply_semigroup, apply_unitary, derivative, laplacian

logger = logging.getLogger(__name__)

NODAL_THRESHOLD = 1e-12
LOG_FLOOR = 1e-300
MAX_WAVE_STEP = 1e-3


# Explicit Cauchy-Schrodinger solution


def cauchy_initial(x):
    """f(x) = (2/pi)^(1/2) / (1 + x^2)"""

    return math.sqrt(2.0 / math.pi) / (1.0 + np.square(x))


def cauchy_closed_form_state(x, s: float):
    """psi(x,s) = 1/2[f(x+s) + f(x-s)] + i/2[(x-s)f(x-s) - (x+s)f(x+s)]"""

    x = np.asarray(x, dtype=float)
    ahead, behind = cauchy_initial(x + s), cauchy_initial(x - s)
    return 0.5 * (ahead + behind) + 0.5j * ((x - s) * behind - (x + s) * ahead)


def cauchy_density(x, s: float):
    """rho(x,s) = (1 + s^2) [rho0(x+s) rho0(x-s)]^(1/2) with rho0 = f^2"""

    x = np.asarray(x, dtype=float)
    return (1.0 + s * s) * cauchy_initial(x + s) * cauchy_initial(x - s)


def cauchy_rho_hat_initial(p):
    """(2 pi)^(-1/2) (1 + |p|) e^{-|p|}"""

    a = np.abs(p)
    return (1.0 + a) * np.exp(-a) / math.sqrt(2.0 * math.pi)


def cauchy_rho_hat(p, t: float):
    """(2 pi)^(-1/2) e^{-|p|} [cos(t|p|) + sin(t|p|)/t]"""

    if not t > 0:
        raise LevyBridgeValidationError(f"t must be > 0: found {t}")
    a = np.abs(p)
    return np.exp(-a) * (np.cos(t * a) + np.sin(t * a) / t) / math.sqrt(2.0 * math.pi)


def real_imaginary_defect(x, t: float) -> float:
    """max |Re psi - Im psi / t - (2 pi)^(1/2) rho| for the explicit solution"""

    if not t > 0:
        raise LevyBridgeValidationError(f"t must be > 0: found {t}")
    psi = cauchy_closed_form_state(x, t)
    return float(np.max(np.abs(psi.real - psi.imag / t - math.sqrt(2.0 * math.pi) * cauchy_density(x, t))))


def unitary_transport_defect(t: float) -> float:
    """L1 distance between int p(x - y, t) rho0(y) dy and rho(x, t) on the g-table grid"""

    kernel = UnitaryTransitionKernel(t)
    transition = kernel.table_field()
    grid = transition.grid
    n = grid.n
    full = signal.fftconvolve(cauchy_density(grid.x, 0.0), transition.samples, mode="full")
    moved = grid.dx * full[n // 2 : n // 2 + n]
    return float(grid.dx * np.sum(np.abs(moved - cauchy_density(grid.x, t))))


def current_velocity(psi: ComplexField, interval: BorelInterval) -> float:
    """int_A 2 Im(conj(psi) psi') dx, the current carried through A"""

    slope = derivative(psi).samples
    inside = interval.contains(psi.grid.x)
    return float(psi.grid.dx * np.sum(2.0 * np.imag(np.conj(psi.samples[inside]) * slope[inside])))


# Madelung machinery


def _window_mask(grid: Grid1D, window: Optional[float]) -> np.ndarray:
    if window is None:
        return np.ones(grid.n, dtype=bool)
    if not window > 0:
        raise LevyBridgeValidationError(f"window must be > 0: found {window}")
    return np.abs(grid.x) <= window


def _check_nodes(amplitude: np.ndarray, inside: np.ndarray):
    if np.any(amplitude[inside] <= NODAL_THRESHOLD):
        raise NodalRegionError(f"amplitude falls below {NODAL_THRESHOLD} inside the evaluation region")


def madelung_decompose(psi: ComplexField, window: Optional[float] = None) -> MadelungPair:
    """R = ln|psi| and S the unwrapped phase, anchored so that S equals the principal angle where |psi| peaks"""

    amplitude = np.abs(psi.samples)
    _check_nodes(amplitude, _window_mask(psi.grid, window))
    raw = np.angle(psi.samples)
    S = np.unwrap(raw)
    anchor = int(np.argmax(amplitude))
    S = S + 2.0 * math.pi * round((raw[anchor] - S[anchor]) / (2.0 * math.pi))
    R = np.log(np.maximum(amplitude, LOG_FLOOR))
    return MadelungPair(R=RealField(grid=psi.grid, samples=R), S=RealField(grid=psi.grid, samples=S))


def quantum_potential(rho_sqrt: RealField, kind: NoiseKind, window: Optional[float] = None) -> QuantumPotentialField:
    """Q = (H rho^(1/2)) / rho^(1/2), zero outside the window"""

    inside = _window_mask(rho_sqrt.grid, window)
    _check_nodes(np.abs(rho_sqrt.samples), inside)
    action = apply_generator_spectral(rho_sqrt, kind).samples.real
    Q = np.zeros(rho_sqrt.grid.n)
    Q[inside] = action[inside] / rho_sqrt.samples[inside]
    return QuantumPotentialField(Q=rho_sqrt.with_samples(Q))


def diffusion_quantum_potential(rho_sqrt: RealField, D: float, window: Optional[float] = None) -> RealField:
    """Q = 2D Delta rho^(1/2) / rho^(1/2) of the adjoint diffusion pair, i.e. -2 times the Gaussian-kind potential"""

    Q = quantum_potential(rho_sqrt, GaussianNoise(D=D), window).Q
    return Q.with_samples(-2.0 * Q.samples)


def sturm_liouville_potential(
    rho: DensityField, kind: NoiseKind, E: float, window: Optional[float] = None
) -> RealField:
    """V = E - (H rho^(1/2)) / rho^(1/2), the potential making rho^(1/2) a stationary state with energy E"""

    if np.any(rho.samples < 0):
        raise LevyBridgeValidationError("rho must be nonnegative")
    Q = quantum_potential(rho.with_samples(np.sqrt(rho.samples)), kind, window).Q
    inside = _window_mask(rho.grid, window)
    return Q.with_samples(np.where(inside, E - Q.samples, 0.0))


def stationary_residual(
    rho: DensityField, kind: NoiseKind, V: RealField, E: float, window: Optional[float] = None
) -> float:
    """max |H rho^(1/2) - [2Q + V - E] rho^(1/2)| over the window"""

    rho_sqrt = rho.with_samples(np.sqrt(rho.samples))
    Q = quantum_potential(rho_sqrt, kind, window).Q.samples
    action = apply_generator_spectral(rho_sqrt, kind).samples.real
    inside = _window_mask(rho.grid, window)
    residual = action - (2.0 * Q + V.samples - E) * rho_sqrt.samples
    return float(np.max(np.abs(residual[inside])))


def _check_spacing(times: Sequence[float]) -> float:
    if len(times) < 3:
        raise LevyBridgeValidationError(f"at least 3 snapshots are required: found {len(times)}")
    steps = np.diff(np.asarray(times, dtype=float))
    dt = float(steps[0])
    if not dt > 0 or np.any(np.abs(steps - dt) > 1e-9 * max(1.0, abs(dt))):
        raise LevyBridgeValidationError("snapshot times must be increasing and equally spaced")
    return dt


def _align_branches(pairs: Sequence[MadelungPair], anchor: int) -> list:
    aligned = [pairs[0]]
    for pair in pairs[1:]:
        reference = aligned[-1].S.samples[anchor]
        shift = 2.0 * math.pi * round((reference - pair.S.samples[anchor]) / (2.0 * math.pi))
        aligned.append(MadelungPair(R=pair.R, S=pair.S.with_samples(pair.S.samples + shift)))
    return aligned


def madelung_rates(
    pair: MadelungPair, kind: NoiseKind, quadrature: LevyQuadrature, potential: Optional[np.ndarray] = None
) -> dict:
    """Right-hand sides of the evolution equations of R, S, Theta = e^{R+S} and Theta* = e^{R-S},
    restricted to the quadrature mask"""

    R, S = pair.R.samples, pair.S.samples
    base_R, base_S = quadrature.restrict(R), quadrature.restrict(S)
    shifted = quadrature.shifter(np.vstack([R, S]))

    def integrand(y: float) -> np.ndarray:
        moved = shifted(y).real
        r, s = moved[0] - base_R, moved[1] - base_S
        grow, sin, cos = np.exp(r), np.sin(s), np.cos(s)
        return np.vstack(
            [
                grow * sin - s,
                grow * cos - 1.0 - r,
                grow * (cos - sin + np.exp(s) - 2.0),
                grow * (sin + cos + np.exp(-s) - 2.0),
                grow - 1.0,
            ]
        )

    jumps = quadrature.integrate(integrand).real
    grid = pair.R.grid

    def generator(samples: np.ndarray) -> np.ndarray:
        return quadrature.restrict(apply_generator_spectral(RealField(grid=grid, samples=samples), kind).samples.real)

    theta, theta_star = np.exp(R + S), np.exp(R - S)
    Q = -jumps[4]
    rates = {
        "R": generator(S) - jumps[0],
        "S": -generator(R) + jumps[1],
        "theta": generator(theta) + quadrature.restrict(theta) * (-2.0 * Q + jumps[2]),
        "theta_star": -generator(theta_star) + quadrature.restrict(theta_star) * (2.0 * Q - jumps[3]),
    }
    if potential is not None:
        V = quadrature.restrict(potential)
        rates["S"] = rates["S"] - V
        rates["theta"] = rates["theta"] - V * quadrature.restrict(theta)
        rates["theta_star"] = rates["theta_star"] + V * quadrature.restrict(theta_star)
    return rates


def madelung_evolution_residual(
    snapshots: Sequence[ComplexField],
    times: Sequence[float],
    kind: NoiseKind,
    eps: float = 1e-3,
    window: float = 10.0,
    potential: Optional[RealField] = None,
) -> MadelungResidualReport:
    """Largest gap between central time differences of R, S, Theta, Theta* and their jump-integral right-hand sides"""

    if len(snapshots) != len(times):
        raise LevyBridgeValidationError("snapshots and times must have equal length")
    dt = _check_spacing(times)
    if not kind.pure_jump:
        raise LevyBridgeValidationError(f"kind must be pure-jump: found {kind.family}")
    grid = snapshots[0].grid
    mask = _window_mask(grid, window)
    quadrature = LevyQuadrature(kind, eps, grid, mask=mask)

    pairs = [madelung_decompose(psi, window) for psi in snapshots]
    anchor = int(np.argmax(np.abs(snapshots[len(snapshots) // 2].samples)))
    pairs = _align_branches(pairs, anchor)
    V = None if potential is None else potential.samples

    def fields(pair: MadelungPair) -> dict:
        R, S = pair.R.samples[mask], pair.S.samples[mask]
        return {"R": R, "S": S, "theta": np.exp(R + S), "theta_star": np.exp(R - S)}

    sampled = [fields(pair) for pair in pairs]
    worst = {"R": 0.0, "S": 0.0, "theta": 0.0, "theta_star": 0.0}
    for k in range(1, len(pairs) - 1):
        rates = madelung_rates(pairs[k], kind, quadrature, V)
        for name in worst:
            derivative_fd = (sampled[k + 1][name] - sampled[k - 1][name]) / (2.0 * dt)
            worst[name] = max(worst[name], float(np.max(np.abs(derivative_fd - rates[name]))))
    logger.debug("Madelung residuals at eps=%g: %s", eps, worst)
    return MadelungResidualReport(window=window, **worst)


def adjoint_diffusion_residual(
    params: GaussianPacketParams, t: float, grid: Grid1D, dt: float = 1e-4, window: float = 8.0
) -> float:
    """max residual of d/dt Theta = -D Theta'' + Q Theta and d/dt Theta* = D Theta*'' - Q Theta*
    for the free Gaussian packet, Q = 2D Delta rho^(1/2) / rho^(1/2)"""

    D = params.D
    inside = _window_mask(grid, window)

    def adjoint(time: float):
        R, S = madelung_exponents(grid.x, time, params)
        return np.exp(R + S), np.exp(R - S), R

    theta, theta_star, R = adjoint(t)
    theta_next, star_next, _ = adjoint(t + dt)
    theta_prev, star_prev, _ = adjoint(t - dt)
    Q = diffusion_quantum_potential(RealField(grid=grid, samples=np.exp(R)), D, window).samples
    lap_theta = laplacian(RealField(grid=grid, samples=theta)).samples.real
    lap_star = laplacian(RealField(grid=grid, samples=theta_star)).samples.real
    forward = (theta_next - theta_prev) / (2.0 * dt) - (-D * lap_theta + Q * theta)
    backward = (star_next - star_prev) / (2.0 * dt) - (D * lap_star - Q * theta_star)
    return float(max(np.max(np.abs(forward[inside])), np.max(np.abs(backward[inside]))))


def exponential_action_residual(
    phi: RealField, kind: NoiseKind, eps: float = 1e-4, window: Optional[float] = None
) -> float:
    """max |H e^Phi - e^Phi [H Phi - int (e^{Phi_xy} - 1 - Phi_xy) dnu]| with H applied spectrally"""

    grid = phi.grid
    mask = _window_mask(grid, window)
    quadrature = LevyQuadrature(kind, eps, grid, mask=mask)
    base = quadrature.restrict(phi.samples)
    shifted = quadrature.shifter(phi.samples)

    def integrand(y: float) -> np.ndarray:
        step = shifted(y).real - base
        return np.exp(step) - 1.0 - step

    remainder = quadrature.integrate(integrand)
    direct = apply_generator_spectral(phi.with_samples(np.exp(phi.samples)), kind).samples.real[mask]
    generated = apply_generator_spectral(phi, kind).samples.real[mask]
    return float(np.max(np.abs(direct - np.exp(base) * (generated - remainder))))


# Wave-equation forms


def wave_equation_residual(
    kind: NoiseKind, psi0: ComplexField, t_center: float, dt: float = 1e-3, euclidean: bool = False
) -> WaveResidualReport:
    """Second-order time differencing of the evolved state against the D'Alembert (Cauchy) or
    Klein-Gordon (relativistic) form; euclidean=True checks the semigroup counterparts"""

    if not kind.pure_jump:
        raise LevyBridgeValidationError(f"kind must be cauchy or relativistic: found {kind.family}")
    if not dt > 0:
        raise LevyBridgeValidationError(f"dt must be > 0: found {dt}")
    if dt > MAX_WAVE_STEP:
        logger.warning("dt=%g exceeds %g; time differencing error may dominate", dt, MAX_WAVE_STEP)
    times = (t_center - dt, t_center, t_center + dt)
    mass = 0.0 if isinstance(kind, CauchyNoise) else kind.m

    if euclidean:
        if t_center - dt < 0:
            raise LevyBridgeValidationError(f"t_center - dt must be >= 0: found {t_center - dt}")
        start = RealField(grid=psi0.grid, samples=psi0.samples.real)
        states = [apply_semigroup(start, kind, s).samples * math.exp(-mass * s) for s in times]
        sign, equation = -1.0, "euclidean-" + kind.family
    else:
        states = [apply_unitary(psi0, kind, s).samples * np.exp(-1j * mass * s) for s in times]
        sign, equation = 1.0, "dalembert" if mass == 0.0 else "klein-gordon"

    second = (states[2] - 2.0 * states[1] + states[0]) / dt**2
    spatial = laplacian(ComplexField(grid=psi0.grid, samples=states[1])).samples - mass**2 * states[1]
    # Minkowski: psi_tt = Delta psi - m^2 psi; Euclidean: rho_tt = -(Delta rho - m^2 rho)
    residual = float(np.max(np.abs(second - sign * spatial)))
    scale = float(np.max(np.abs(spatial)))
    return WaveResidualReport(equation=equation, residual=residual, scale=scale)
