"""
Module that provides the desk-scale acceptance suite run by the `acceptance` experiment
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from levy_bridge.bridge import (
    BridgeInterpolation,
    bernstein_transport_defect,
    free_packet,
    gaussian_bridge_problem,
    gaussian_bridge_variance,
    solve_marginal_system,
)
from levy_bridge.checks import CheckLog
from levy_bridge.common import JumpRateMode
from levy_bridge.exceptions import LevyBridgeError
from levy_bridge.jumps import (
    empirical_vs_analytic,
    fokker_planck_residual,
    jump_rate_profile,
    points_outside,
    simulate_ensemble,
    truncate,
)
from levy_bridge.kernels import (
    UnitaryTransitionKernel,
    bernstein_closed_form,
    bernstein_density,
    bessel_k1,
    chapman_kolmogorov_residual,
    k1_integral,
    kernel_field,
    kernel_mass,
)
from levy_bridge.markov_diag import characteristic_multiplier, find_nonmarkov_witness, h_ratio, random_pd_trials
from levy_bridge.quantum import (
    cauchy_closed_form_state,
    cauchy_density,
    cauchy_rho_hat,
    cauchy_rho_hat_initial,
    exponential_action_residual,
    real_imaginary_defect,
    unitary_transport_defect,
    wave_equation_residual,
)
from levy_bridge.schemas import (
    BernsteinParams,
    BorelInterval,
    CauchyKernel,
    CauchyNoise,
    ComplexField,
    GaussianBridgeParams,
    GaussianPacketParams,
    Grid1D,
    RealField,
    RelativisticKernel,
    RelativisticNoise,
)
from levy_bridge.spectral import apply_generator_levy, apply_generator_spectral, apply_unitary, fourier_transform_at

logger = logging.getLogger(__name__)

Criterion = Callable[[CheckLog], dict]


def _l1(grid: Grid1D, first: np.ndarray, second: np.ndarray) -> float:
    return float(grid.dx * np.sum(np.abs(first - second)))


def density_law(log: CheckLog) -> dict:
    """|psi(x,s)|^2 of the explicit Cauchy solution against (1 + s^2)(rho0(x+s) rho0(x-s))^(1/2)"""

    x = np.linspace(-400.0, 400.0, 10_000)
    data = {}
    for s in (0.5, 1.0, 3.0):
        law = float(np.max(np.abs(np.abs(cauchy_closed_form_state(x, s)) ** 2 - cauchy_density(x, s))))
        mass, _ = integrate.quad(lambda y: float(cauchy_density(y, s)), -400.0, 400.0, points=[-s, s], limit=400)
        log.check(f"law_{s:g}", law, 1e-12)
        log.check(f"mass_{s:g}", abs(mass - 1.0), 1e-6)
        log.check(f"real_imaginary_{s:g}", real_imaginary_defect(x, s), 1e-12)
        data[f"{s:g}"] = {"law": law, "mass": mass}
    return data


def spectral_agreement(log: CheckLog) -> dict:
    """Spectral unitary evolution of the Lorentzian against the explicit solution"""

    grid = Grid1D.symmetric(400.0, 8192)
    psi0 = ComplexField(grid=grid, samples=cauchy_closed_form_state(grid.x, 0.0))
    data = {}
    for t in (0.25, 0.5, 1.0, 2.0):
        evolved = apply_unitary(psi0, CauchyNoise(), t).samples
        gap = float(np.max(np.abs(evolved - cauchy_closed_form_state(grid.x, t))))
        log.check(f"max_abs_{t:g}", gap, 1e-4)
        data[f"{t:g}"] = gap
    return data


def characteristic_function(log: CheckLog) -> dict:
    """Fourier transform of the evolved density and the ratio identities of its characteristic function"""

    grid = Grid1D.symmetric(400.0, 16384)
    rho = RealField(grid=grid, samples=cauchy_density(grid.x, 1.0))
    p = np.linspace(0.0, 8.0, 64)
    transform = float(np.max(np.abs(fourier_transform_at(rho, p) - cauchy_rho_hat(p, 1.0))))
    log.check("transform", transform, 1e-5)

    q = np.linspace(0.05, 6.0, 120)
    initial_ratio = 0.0
    time_ratio = 0.0
    for s, t in ((0.5, 1.0), (1.0, 2.0), (0.3, 0.7)):
        initial_ratio = max(
            initial_ratio,
            float(np.max(np.abs(cauchy_rho_hat(q, t) - characteristic_multiplier(q, t) * cauchy_rho_hat_initial(q)))),
        )
        drift = np.abs(cauchy_rho_hat(q, t) - h_ratio(q, s, t) * cauchy_rho_hat(q, s))
        time_ratio = max(time_ratio, float(np.max(drift)))
    log.check("initial_ratio", initial_ratio, 1e-12)
    log.check("time_ratio", time_ratio, 1e-12)
    return {"transform": transform, "initial_ratio": initial_ratio, "time_ratio": time_ratio}


def transition_kernel(log: CheckLog) -> dict:
    """Positivity, moments and transport of the unitary Cauchy transition kernel at t = 1"""

    kernel = UnitaryTransitionKernel(1.0)
    field = kernel.table_field()
    x = field.grid.x
    regular = np.abs(x) <= 50.0
    regular[kernel.singular_cells()] = False
    minimum = float(np.min(field.samples[regular]))
    moments = kernel.moments()
    transport = unitary_transport_defect(1.0)
    log.check("min_off_singularities", minimum, 0.0, ">")
    log.check("mass", abs(moments["mass"] - 1.0), 1e-4)
    log.check("mean", abs(moments["mean"]), 1e-6)
    log.check("second_moment", abs(moments["second_moment"] - 1.0), 1e-3)
    log.check("transport", transport, 1e-3)
    return {"min_off_singularities": minimum, "moments": moments, "transport": transport}


def nonmarkov_witness(log: CheckLog) -> dict:
    """Bochner violation of the intermediate ratio kernel next to a genuine characteristic function"""

    witness = find_nonmarkov_witness(1.0, 2.0)
    log.check("separation", abs(abs(witness.p1 - witness.p2) - 0.75 * math.pi), 1e-3)
    log.check("abs_M", abs(witness.M), 10.0, ">")
    log.check("min_eigenvalue", witness.min_eigenvalue, 0.0, "<")
    multiplier = {}
    for t in (0.5, 1.0, 2.0):
        multiplier[f"{t:g}"] = random_pd_trials(
            lambda p, t=t: characteristic_multiplier(p, t), trials=100, max_points=8
        )
        log.check(f"multiplier_pd_{t:g}", multiplier[f"{t:g}"], -1e-10, ">=")
    return {"witness": witness, "multiplier_min_eigenvalue": multiplier}


def bridge_solver(log: CheckLog) -> dict:
    """Heat-kernel bridge between N(0,1) and N(0,2) against the exact Gaussian interpolation"""

    params = GaussianBridgeParams(var1=1.0, var2=2.0)
    problem = gaussian_bridge_problem(params, Grid1D.symmetric(20.0, 2048))
    solution = solve_marginal_system(problem)
    interpolation = BridgeInterpolation(problem, solution)
    grid = problem.grid
    density = interpolation.density(0.5).samples
    variance = gaussian_bridge_variance(0.5, params)
    exact = np.exp(-np.square(grid.x) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
    broadened = np.exp(-np.square(grid.x) / 2.5) / math.sqrt(2.5 * math.pi)
    interpolation_error = _l1(grid, density, exact)
    chapman = interpolation.chapman_kolmogorov_residual(0.25, 0.5, 0.75, window=8.0)
    log.check("interpolation_l1", interpolation_error, 1e-4)
    log.check("marginal_residual", solution.residual, 1e-10)
    log.check("chapman_kolmogorov", chapman, 1e-5)
    return {
        "interpolation_l1": interpolation_error,
        "variance": variance,
        "distance_to_unit_plus_t_squared": _l1(grid, density, broadened),
        "iterations": solution.iterations,
        "marginal_residual": solution.residual,
        "chapman_kolmogorov": chapman,
    }


def bernstein_symmetry(log: CheckLog) -> dict:
    """Time symmetry of the Bernstein density and its transport by the bridge transition"""

    params = BernsteinParams(alpha0=1.0, D=1.0)
    grid = Grid1D.symmetric(20.0, 2048)
    x = grid.x
    symmetry = max(
        float(np.max(np.abs(bernstein_density(x, -t, params) - bernstein_density(x, t, params))))
        for t in (0.3, 0.5, 0.9)
    )
    closed_form = float(np.max(np.abs(bernstein_density(x, 0.3, params) - bernstein_closed_form(x, 0.3, params))))
    transport = bernstein_transport_defect(params, -0.3, 0.3, grid)
    log.check("symmetry", symmetry, 1e-12)
    log.check("closed_form", closed_form, 1e-12)
    log.check("transport_l1", transport, 1e-6)
    return {"symmetry": symmetry, "closed_form": closed_form, "transport_l1": transport}


def kernels(log: CheckLog) -> dict:
    """Positivity, normalization and Chapman-Kolmogorov for the jump kernels, and the K1 oracle"""

    grid = Grid1D.symmetric(50.0, 4096)
    data = {}
    for kind in (CauchyKernel(), RelativisticKernel(m=1.0)):
        minimum = float(np.min(kernel_field(kind, 1.0, grid).samples))
        mass = kernel_mass(kind, 1.0)
        chapman = chapman_kolmogorov_residual(kind, 0.0, 0.5, 1.0)
        log.check(f"{kind.family}_min", minimum, 0.0, ">")
        log.check(f"{kind.family}_mass", abs(mass - 1.0), 1e-6)
        log.check(f"{kind.family}_chapman_kolmogorov", chapman, 1e-5)
        data[kind.family] = {"min": minimum, "mass": mass, "chapman_kolmogorov": chapman}
    z = np.geomspace(0.05, 20.0, 50)
    k1_gap = float(np.max(np.abs(bessel_k1(z) - np.array([k1_integral(v) for v in z]))))
    log.check("k1_integral", k1_gap, 1e-9)
    data["k1_integral"] = k1_gap
    data["relativistic_origin"] = float(RelativisticKernel(m=1.0).density(0.0, 1.0))
    return data


def monte_carlo(log: CheckLog) -> dict:
    """10^5 truncated Cauchy paths against the free Cauchy law at t = 1"""

    levy = truncate(CauchyNoise(), 1e-3)
    ensemble = simulate_ensemble(levy, 1.0, 100_000, seed=0, times=[1.0])
    report = empirical_vs_analytic(ensemble, 1.0)
    n = ensemble.n_paths
    expected = levy.lambda_eps
    counts = ensemble.jump_counts
    count_z = abs(float(np.mean(counts)) - expected) / math.sqrt(expected / n)
    log.check("l1_error", report.l1_error, 0.05)
    log.check("jump_count_z", count_z, 3.0)
    log.check("charfn_deviation", report.charfn_deviation, report.charfn_bound)
    return {
        "l1_error": report.l1_error,
        "jump_count_mean": float(np.mean(counts)),
        "jump_count_expected": expected,
        "charfn_deviation": report.charfn_deviation,
    }


def jump_rates(log: CheckLog) -> dict:
    """Nonnegative ground and quantum rates outside A, and truncated Fokker-Planck residuals shrinking with eps"""

    noise = CauchyNoise()
    kernel = CauchyKernel()
    fine = truncate(noise, 0.05)

    ground_interval = BorelInterval(a=1.0, b=3.0)
    quantum_interval = BorelInterval(a=1.0, b=2.0)
    # theta of a Cauchy bridge pinned at the origin at time 2, seen at t = 1
    def theta(x):
        return kernel.density(x, 1.0)

    ground = jump_rate_profile(JumpRateMode.GROUND, theta, points_outside(ground_interval), ground_interval, fine)
    quantum = jump_rate_profile(
        JumpRateMode.QUANTUM,
        lambda x: cauchy_closed_form_state(x, 1.0),
        points_outside(quantum_interval),
        quantum_interval,
        fine,
    )
    log.check("ground_min", float(np.min(ground)), -1e-12, ">=")
    log.check("quantum_min", float(np.min(quantum)), -1e-10, ">=")

    residuals = {"ground": [], "quantum": []}
    quantum_fp_interval = BorelInterval(a=0.0, b=2.0)
    for eps in (0.2, 0.1, 0.05):
        levy = truncate(noise, eps)
        free = fokker_planck_residual(
            JumpRateMode.GROUND,
            lambda _: (lambda x: 1.0),
            ground_interval,
            levy,
            1.0,
            density=lambda time: (lambda x: kernel.density(x, time)),
        )
        unitary = fokker_planck_residual(
            JumpRateMode.QUANTUM,
            lambda time: (lambda x: cauchy_closed_form_state(x, time)),
            quantum_fp_interval,
            levy,
            1.0,
        )
        residuals["ground"].append(free.residual)
        residuals["quantum"].append(unitary.residual)
    for mode, values in residuals.items():
        log.check(f"{mode}_decrease", max(b / a for a, b in zip(values[:-1], values[1:])), 1.0, "<")
    return {"ground_min": float(np.min(ground)), "quantum_min": float(np.min(quantum)), "fokker_planck": residuals}


def wave_equations(log: CheckLog) -> dict:
    """D'Alembert and Klein-Gordon residuals of the unitary evolutions and their Euclidean counterparts"""

    cauchy_grid = Grid1D.symmetric(400.0, 8192)
    lorentzian = ComplexField(grid=cauchy_grid, samples=cauchy_closed_form_state(cauchy_grid.x, 0.0))
    packet_grid = Grid1D.symmetric(100.0, 4096)
    packet = ComplexField(grid=packet_grid, samples=free_packet(packet_grid.x, 0.0, GaussianPacketParams()))
    data = {}
    for kind, psi0 in ((CauchyNoise(), lorentzian), (RelativisticNoise(m=1.0), packet)):
        for euclidean in (False, True):
            report = wave_equation_residual(kind, psi0, 1.0, 1e-3, euclidean=euclidean)
            log.check(report.equation, report.relative, 1e-3)
            data[report.equation] = report.relative
    return data


def generator_oracles(log: CheckLog) -> dict:
    """Spectral against Levy-Khintchine generator action, and the exponential-action identity"""

    grid = Grid1D.symmetric(20.0, 1024)
    smooth = RealField(grid=grid, samples=np.exp(-np.square(grid.x) / 2.0))
    data = {}
    for kind in (CauchyNoise(), RelativisticNoise(m=1.0)):
        spectral = apply_generator_spectral(smooth, kind).samples
        quadrature = apply_generator_levy(smooth, kind, 1e-4).samples
        gap = float(np.max(np.abs(spectral - quadrature)))
        action = exponential_action_residual(smooth, kind, 1e-4)
        log.check(f"{kind.family}_generator", gap, 1e-3)
        log.check(f"{kind.family}_exponential_action", action, 3e-3)
        data[kind.family] = {"generator": gap, "exponential_action": action}
    return data


ACCEPTANCE_SUITE: Tuple[Tuple[str, Criterion], ...] = (
    ("density_law", density_law),
    ("spectral_agreement", spectral_agreement),
    ("characteristic_function", characteristic_function),
    ("transition_kernel", transition_kernel),
    ("nonmarkov_witness", nonmarkov_witness),
    ("bridge_solver", bridge_solver),
    ("bernstein_symmetry", bernstein_symmetry),
    ("kernels", kernels),
    ("monte_carlo", monte_carlo),
    ("jump_rates", jump_rates),
    ("wave_equations", wave_equations),
    ("generator_oracles", generator_oracles),
)


def _run_criterion(name: str, criterion: Criterion, log: CheckLog) -> Tuple[CheckLog, dict]:
    scoped = log.scope(name)
    started = time.perf_counter()
    try:
        data = criterion(scoped)
    except LevyBridgeError as e:
        scoped.error("error", e)
        data = {"error": e.message}
    logger.info("Acceptance criterion %s finished in %.2f s", name, time.perf_counter() - started)
    return scoped, data


def run_suite(log: CheckLog, threads: int, names: Optional[List[str]] = None) -> Dict[str, dict]:
    """Runs the selected criteria concurrently and merges their checks in suite order"""

    selected = [(name, criterion) for name, criterion in ACCEPTANCE_SUITE if names is None or name in names]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(lambda item: _run_criterion(item[0], item[1], log), selected))
    data = {}
    for (name, _), (scoped, criterion_data) in zip(selected, outcomes):
        log.extend(scoped)
        data[name] = criterion_data
    return data
