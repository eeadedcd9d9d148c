"""
Module that provides the experiment runner for the Levy Bridge library
"""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import integrate

from levy_bridge import acceptance
from levy_bridge.bridge import (
    BridgeInterpolation,
    bernstein_bridge_problem,
    bernstein_drift_residual,
    bernstein_transport_defect,
    free_packet,
    gaussian_bridge_problem,
    gaussian_bridge_variance,
    solve_marginal_system,
)
from levy_bridge.checks import CheckLog
from levy_bridge.common import Experiment, InitialState, JumpRateMode
from levy_bridge.config import get_config
from levy_bridge.exceptions import ConfigError, LevyBridgeError, LevyBridgeValidationError, NodalRegionError
from levy_bridge.io import OutputBundle, load_bridge_problem, read_field_csv
from levy_bridge.jumps import (
    MIN_PATHS,
    empirical_vs_analytic,
    fokker_planck_residual,
    jump_rate_profile,
    points_outside,
    rate_symmetry_defect,
    simulate_ensemble,
    truncate,
)
from levy_bridge.kernels import (
    UnitaryTransitionKernel,
    bernstein_closed_form,
    bessel_k1,
    chapman_kolmogorov_residual,
    g_table,
    k1_asymptotic,
    k1_integral,
    k1_series,
    kernel_field,
    kernel_mass,
)
from levy_bridge.markov_diag import (
    characteristic_multiplier,
    denominator_zeros,
    find_nonmarkov_witness,
    h_profile,
    random_pd_trials,
    two_point_violation,
)
from levy_bridge.quantum import (
    cauchy_closed_form_state,
    cauchy_initial,
    madelung_evolution_residual,
    unitary_transport_defect,
    wave_equation_residual,
)
from levy_bridge.schemas import (
    BernsteinParams,
    BorelInterval,
    BridgeProblem,
    CauchyKernel,
    CauchyNoise,
    ComplexField,
    ExperimentConfig,
    GaussianBridgeParams,
    GaussianNoise,
    GaussianPacketParams,
    Grid1D,
    HeatKernel,
    NoiseKind,
    RelativisticKernel,
    RunReport,
)
from levy_bridge.spectral import apply_unitary

logger = logging.getLogger(__name__)

WAVE_STEP = 1e-3
MADELUNG_STEP = 1e-2
MADELUNG_EPS = 1e-3
CK_WINDOW = 8.0


def time_label(t: float) -> str:
    """Shortest decimal form of a time, used in output file names"""

    return format(float(t), "g")


def default_grid(noise: NoiseKind) -> Grid1D:
    """Default evolution grid per noise family"""

    if isinstance(noise, CauchyNoise):
        return Grid1D.symmetric(400.0, 8192)
    if isinstance(noise, GaussianNoise):
        return Grid1D.symmetric(40.0, 2048)
    return Grid1D.symmetric(100.0, 4096)


def jump_kernel(noise: NoiseKind):
    """Semigroup kernel of a pure-jump noise"""

    if isinstance(noise, CauchyNoise):
        return CauchyKernel()
    if isinstance(noise, GaussianNoise):
        raise LevyBridgeValidationError(f"kind must be pure-jump: found {noise.family}")
    return RelativisticKernel(m=noise.m)


def _l1(grid: Grid1D, first: np.ndarray, second: np.ndarray) -> float:
    return float(grid.dx * np.sum(np.abs(first - second)))


class ExperimentRunner:
    """Levy Bridge Experiment Runner"""

    def __init__(self, threads: Optional[int] = None):
        self.threads = threads or get_config().LEVY_BRIDGE_THREADS
        self.handlers: Dict[Experiment, Callable[[ExperimentConfig, OutputBundle, CheckLog], dict]] = {
            Experiment.EVOLVE: self.evolve,
            Experiment.BRIDGE: self.bridge,
            Experiment.SIMULATE: self.simulate,
            Experiment.MARKOV_TEST: self.markov_test,
            Experiment.KERNELS: self.kernels,
            Experiment.JUMPRATE: self.jumprate,
            Experiment.ACCEPTANCE: self.acceptance,
        }

    def run(self, config: ExperimentConfig, write: bool = True) -> RunReport:
        """Run Experiment"""

        logger.info("Running %s into %s", config.experiment.value, config.output_dir)
        bundle = OutputBundle()
        log = CheckLog(config.tolerances, config.experiment.value)
        try:
            data = self.handlers[config.experiment](config, bundle, log)
        except ConfigError:
            raise
        except LevyBridgeError as e:
            log.error("error", e)
            data = {"error": e.message}

        report = RunReport(
            experiment=config.experiment,
            passed=log.passed,
            first_failure=log.first_failure,
            checks=log.results,
            data=data,
        )
        bundle.add_json("report.json", report)
        if write:
            bundle.write(config.output_dir)
        outcome = "passed" if report.passed else f"failed at {report.first_failure}"
        logger.info("%s %s", config.experiment.value, outcome)
        return report

    # evolve

    def initial_state(self, config: ExperimentConfig) -> ComplexField:
        """psi0 on the configured grid, or the field stored in a file:<csv> selector"""

        if isinstance(config.psi0, str):
            path = Path(config.psi0[len("file:") :])
            try:
                field = read_field_csv(path)
            except (OSError, ValueError) as e:
                raise ConfigError(f"Cannot read initial state {path}: {e}") from e
            return field if isinstance(field, ComplexField) else ComplexField.from_real(field)
        grid = config.grid or default_grid(config.noise)
        if config.psi0 == InitialState.GAUSSIAN:
            return ComplexField(grid=grid, samples=free_packet(grid.x, 0.0, self._packet_params(config.noise)))
        return ComplexField(grid=grid, samples=cauchy_initial(grid.x))

    @staticmethod
    def _packet_params(noise: NoiseKind) -> GaussianPacketParams:
        return GaussianPacketParams(D=noise.D) if isinstance(noise, GaussianNoise) else GaussianPacketParams()

    def _closed_form(self, config: ExperimentConfig, grid: Grid1D, t: float) -> Optional[np.ndarray]:
        if isinstance(config.psi0, str):
            return None
        if isinstance(config.noise, CauchyNoise) and config.psi0 == InitialState.CAUCHY_LORENTZIAN:
            return cauchy_closed_form_state(grid.x, t)
        if isinstance(config.noise, GaussianNoise) and config.psi0 == InitialState.GAUSSIAN:
            return free_packet(grid.x, t, self._packet_params(config.noise))
        return None

    def evolve(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Evolve"""

        kind = config.noise
        psi0 = self.initial_state(config)
        grid = psi0.grid
        norm0 = psi0.norm() ** 2
        residuals = {}
        for t in config.times or [1.0]:
            label = time_label(t)
            psi = apply_unitary(psi0, kind, t)
            bundle.add_field(f"psi_{label}.csv", psi)
            bundle.add_field(f"rho_{label}.csv", psi.density(), "rho")

            entry = {"norm_drift": abs(psi.norm() ** 2 - norm0) / norm0}
            log.check(f"norm_{label}", entry["norm_drift"], 1e-10)
            reference = self._closed_form(config, grid, t)
            if reference is not None:
                entry["closed_form"] = float(np.max(np.abs(psi.samples - reference)))
                log.check(f"closed_form_{label}", entry["closed_form"], 1e-4)
            if kind.pure_jump and t > WAVE_STEP:
                wave = wave_equation_residual(kind, psi0, t, WAVE_STEP)
                entry[wave.equation] = wave.relative
                log.check(f"{wave.equation}_{label}", wave.relative, 1e-3)
            if kind.pure_jump and t > MADELUNG_STEP:
                entry["madelung"] = self._madelung(psi0, kind, t)
                if isinstance(entry["madelung"], dict):
                    log.check(f"madelung_{label}", max(entry["madelung"].values()))
            residuals[label] = entry

        bundle.add_json("residuals.json", residuals)
        return {"grid": grid, "kind": kind, "residuals": residuals}

    @staticmethod
    def _madelung(psi0: ComplexField, kind: NoiseKind, t: float):
        times = [t - MADELUNG_STEP, t, t + MADELUNG_STEP]
        snapshots = [apply_unitary(psi0, kind, s) for s in times]
        try:
            report = madelung_evolution_residual(snapshots, times, kind, eps=MADELUNG_EPS)
        except NodalRegionError as e:
            logger.info("Madelung residual skipped at t=%g: %s", t, e.message)
            return "nodal"
        return {"R": report.R, "S": report.S, "theta": report.theta, "theta_star": report.theta_star}

    # bridge

    def bridge(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Bridge"""

        gaussian_pair = None
        if config.problem_file is not None:
            problem = load_bridge_problem(config.problem_file)
        else:
            gaussian_pair = GaussianBridgeParams(var1=1.0, var2=2.0)
            problem = gaussian_bridge_problem(gaussian_pair, config.grid or Grid1D.symmetric(20.0, 2048))
        span = problem.t2 - problem.t1
        times = config.times or [problem.t1 + 0.25 * span, problem.t1 + 0.5 * span, problem.t1 + 0.75 * span]
        if any(not problem.t1 <= t <= problem.t2 for t in times):
            raise ConfigError(f"times must lie in [{problem.t1}, {problem.t2}]: found {times}")

        solution = solve_marginal_system(problem)
        data = self._bridge_checks(problem, solution, times, bundle, log)
        if gaussian_pair is not None:
            data["gaussian_pair"] = self._gaussian_pair_checks(problem, solution, gaussian_pair, times, log)
            data["bernstein"] = self._bernstein_checks(log.scope("bernstein"))
        return data

    def _bridge_checks(self, problem: BridgeProblem, solution, times: List[float], bundle: OutputBundle, log) -> dict:
        interpolation = BridgeInterpolation(problem, solution)
        grid = problem.grid
        x = grid.x
        log.check("marginal_residual", solution.residual, 1e-10)
        log.check("boundary_t1", _l1(grid, interpolation.density(problem.t1).samples, problem.rho1.samples), 1e-9)
        log.check("boundary_t2", _l1(grid, interpolation.density(problem.t2).samples, problem.rho2.samples), 1e-9)

        thetas, stars, masses = [], [], {}
        for t in times:
            label = time_label(t)
            theta, theta_star = interpolation.theta(x, t), interpolation.theta_star(x, t)
            thetas.append(theta)
            stars.append(theta_star)
            density = interpolation.density(t)
            bundle.add_field(f"rho_interp_{label}.csv", density, "rho")
            masses[label] = density.integral()
            log.check(f"mass_{label}", abs(masses[label] - 1.0), 1e-6)
        header = ["x"] + [f"t={time_label(t)}" for t in times]
        bundle.add_columns("theta.csv", header, [x, *thetas])
        bundle.add_columns("theta_star.csv", header, [x, *stars])

        span = problem.t2 - problem.t1
        s, u, t = (problem.t1 + f * span for f in (0.25, 0.5, 0.75))
        chapman = interpolation.chapman_kolmogorov_residual(s, u, t, window=CK_WINDOW)
        transport = _l1(grid, interpolation.transport(s, t).samples, interpolation.density(t).samples)
        log.check("chapman_kolmogorov", chapman, 1e-5)
        log.check("transport", transport, 1e-5)
        return {
            "kind": problem.kind,
            "iterations": solution.iterations,
            "marginal_residual": solution.residual,
            "residual_history": solution.residual_history,
            "masses": masses,
            "chapman_kolmogorov": chapman,
            "transport": transport,
        }

    @staticmethod
    def _gaussian_pair_checks(problem: BridgeProblem, solution, params: GaussianBridgeParams, times, log) -> dict:
        interpolation = BridgeInterpolation(problem, solution)
        grid = problem.grid
        x = grid.x
        data = {}
        for t in times:
            label = time_label(t)
            variance = gaussian_bridge_variance(t - problem.t1, params)
            exact = np.exp(-np.square(x) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)
            broadened = np.exp(-np.square(x) / (2.0 * (1.0 + t * t))) / math.sqrt(2.0 * math.pi * (1.0 + t * t))
            density = interpolation.density(t).samples
            data[label] = {
                "variance": variance,
                "l1_to_gaussian_bridge": _l1(grid, density, exact),
                "l1_to_unit_plus_t_squared": _l1(grid, density, broadened),
            }
            log.check(f"gaussian_bridge_{label}", data[label]["l1_to_gaussian_bridge"], 1e-4)
        return data

    @staticmethod
    def _bernstein_checks(log: CheckLog) -> dict:
        params = BernsteinParams()
        grid = Grid1D.symmetric(20.0, 2048)
        problem = bernstein_bridge_problem(params, 0.4, grid)
        solution = solve_marginal_system(problem)
        centre = BridgeInterpolation(problem, solution).density(0.0).samples
        data = {
            "l1_at_zero": _l1(grid, centre, bernstein_closed_form(grid.x, 0.0, params)),
            "transport_l1": bernstein_transport_defect(params, -0.3, 0.3, grid),
            "drift_residual": bernstein_drift_residual(params, 0.2, grid),
        }
        log.check("l1_at_zero", data["l1_at_zero"], 1e-4)
        log.check("transport_l1", data["transport_l1"], 1e-6)
        log.check("drift_residual", data["drift_residual"], 1e-5)
        return data

    # simulate

    def simulate(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Simulate"""

        times = config.times or [1.0]
        T = config.horizon or max(times)
        n_paths = config.paths or 100_000
        levy = truncate(config.noise, config.eps or 1e-3)
        ensemble = simulate_ensemble(levy, T, n_paths, config.seed, times, band=config.interval, threads=self.threads)

        counts = ensemble.jump_counts
        expected = levy.lambda_eps * T
        count_mean = float(np.mean(counts))
        meta = {
            "levy": levy,
            "T": T,
            "n_paths": n_paths,
            "seed": config.seed,
            "times": times,
            "jump_count_mean": count_mean,
            "jump_count_expected": expected,
            "zero_jump_fraction": float(np.mean(counts == 0)),
            "zero_jump_probability": math.exp(-expected),
        }
        log.check("jump_count_z", abs(count_mean - expected) / math.sqrt(expected / n_paths), 3.0)
        if config.interval is not None:
            meta["band"] = self._band_rate(ensemble, config.interval, T, log)
        bundle.add_columns(
            "size_histogram.csv",
            ("lower", "upper", "count", "size_sum"),
            (ensemble.size_edges[:-1], ensemble.size_edges[1:], ensemble.size_counts, ensemble.size_sums),
        )

        kernel = jump_kernel(config.noise)
        for t in times:
            label = time_label(t)
            positions = ensemble.positions_at(t)
            bundle.add_columns(f"positions_{label}.csv", ("index", "position"), (np.arange(n_paths), positions))
            displacement = positions - ensemble.start
            imbalance = int(np.count_nonzero(displacement > 0)) - int(np.count_nonzero(displacement < 0))
            meta[f"sign_imbalance_{label}"] = imbalance
            log.check(f"sign_balance_z_{label}", abs(imbalance) / math.sqrt(n_paths), 3.0)
            if n_paths < MIN_PATHS or not t > 0:
                continue
            report = empirical_vs_analytic(ensemble, t)
            grid = report.histogram.grid
            bundle.add_columns(
                f"hist_{label}.csv",
                ("x", "empirical", "analytic"),
                (grid.x, report.histogram.samples, kernel.density(grid.x, t)),
            )
            bundle.add_columns(
                f"charfn_{label}.csv",
                ("p", "re_empirical", "im_empirical", "re_model", "im_model"),
                (
                    report.charfn_p,
                    report.charfn_empirical.real,
                    report.charfn_empirical.imag,
                    report.charfn_model.real,
                    report.charfn_model.imag,
                ),
            )
            meta[f"l1_error_{label}"] = report.l1_error
            meta[f"charfn_deviation_{label}"] = report.charfn_deviation
            log.check(f"l1_error_{label}", report.l1_error, 0.05)
            log.check(f"charfn_deviation_{label}", report.charfn_deviation, report.charfn_bound)
        bundle.add_json("paths_meta.json", meta)
        return meta

    @staticmethod
    def _band_rate(ensemble, band: BorelInterval, T: float, log: CheckLog) -> dict:
        """Jumps per unit time with sizes in the band against nu(band)"""

        density = ensemble.levy.kind.levy_density
        if band.a < 0 < band.b:
            raise ConfigError(f"size band must not contain 0: found [{band.a}, {band.b}]")
        lower, upper = max(band.a, ensemble.levy.eps), band.b
        if band.b < 0:
            lower, upper = band.a, min(band.b, -ensemble.levy.eps)
        expected = integrate.quad(density, lower, upper)[0] if upper > lower else 0.0
        observed = float(np.mean(ensemble.band_counts)) / T
        z = abs(observed - expected) / math.sqrt(max(expected, 1e-300) / (T * ensemble.n_paths))
        log.check("band_rate_z", z, 3.0)
        return {"interval": band, "rate": observed, "expected": expected}

    # markov-test

    def markov_test(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Markov Test"""

        s, t = config.s or 1.0, config.t or 2.0
        witness = find_nonmarkov_witness(s, t)
        p, h = h_profile(s, t, *config.p_range)
        bundle.add_columns("h_profile.csv", ("p", "h"), (p, h))
        violation = two_point_violation(witness.p1, witness.p2, s, t)
        multiplier = random_pd_trials(lambda q: characteristic_multiplier(q, t), seed=config.seed)
        log.check("violation", abs(witness.M), 1.0, ">")
        log.check("min_eigenvalue", witness.min_eigenvalue, 0.0, "<")
        log.check("multiplier_pd", multiplier, -1e-10, ">=")
        return {
            "witness": witness,
            "determinant": violation.det,
            "denominator_zeros": denominator_zeros(s, 5),
            "multiplier_min_eigenvalue": multiplier,
        }

    # kernels

    def kernels(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Kernels"""

        grid = config.grid or Grid1D.symmetric(50.0, 4096)
        times = config.times or [1.0]
        m = config.noise.m if hasattr(config.noise, "m") else 1.0
        D = config.noise.D if isinstance(config.noise, GaussianNoise) else 1.0
        data = {}
        for kind in (HeatKernel(D=D), CauchyKernel(), RelativisticKernel(m=m)):
            entry = {}
            for t in times:
                label = time_label(t)
                field = kernel_field(kind, t, grid)
                bundle.add_field(f"k_{kind.family}_0_{label}.csv", field, "k")
                entry[f"min_{label}"] = float(np.min(field.samples))
                entry[f"mass_{label}"] = kernel_mass(kind, t)
                log.check(f"{kind.family}_min_{label}", entry[f"min_{label}"], 0.0, ">")
                log.check(f"{kind.family}_mass_{label}", abs(entry[f"mass_{label}"] - 1.0), 1e-6)
            entry["chapman_kolmogorov"] = chapman_kolmogorov_residual(kind, 0.0, 0.5 * times[0], times[0])
            log.check(f"{kind.family}_chapman_kolmogorov", entry["chapman_kolmogorov"], 1e-5)
            data[kind.family] = entry
        data["origin"] = float(RelativisticKernel(m=1.0).density(0.0, 1.0))
        data["k1"] = self._k1_checks(log)
        data["unitary"] = self._unitary_checks(times, bundle, log)
        return data

    @staticmethod
    def _k1_checks(log: CheckLog) -> dict:
        z = np.geomspace(0.05, 20.0, 50)
        reference = bessel_k1(z)
        small, large = z[z <= 2.0], z[z >= 10.0]
        data = {
            "integral": float(np.max(np.abs(reference - np.array([k1_integral(v) for v in z])))),
            "series": float(np.max(np.abs(bessel_k1(small) - np.array([k1_series(v) for v in small])))),
            "asymptotic": float(np.max(np.abs(bessel_k1(large) - np.array([k1_asymptotic(v) for v in large])))),
        }
        log.check("k1_integral", data["integral"], 1e-9)
        log.check("k1_series", data["series"], 1e-10)
        log.check("k1_asymptotic", data["asymptotic"], 1e-10)
        return data

    @staticmethod
    def _unitary_checks(times: List[float], bundle: OutputBundle, log: CheckLog) -> dict:
        table = g_table()
        near = np.abs(table.grid.x) <= 20.0
        bundle.add_columns("g_table.csv", ("x", "g", "G"), (table.grid.x[near], table.g.samples[near], table.G[near]))
        data = {}
        for t in times:
            label = time_label(t)
            try:
                kernel = UnitaryTransitionKernel(t, table)
                field = kernel.table_field()
            except LevyBridgeValidationError as e:
                logger.info("Unitary kernel skipped at t=%g: %s", t, e.message)
                data[label] = e.message
                continue
            regular = near.copy()
            regular[kernel.singular_cells()] = False
            bundle.add_columns(f"k_unitary_0_{label}.csv", ("x", "p"), (field.grid.x[near], field.samples[near]))
            moments = kernel.moments()
            entry = {"min_off_singularities": float(np.min(field.samples[regular])), **moments}
            entry["transport"] = unitary_transport_defect(t)
            log.check(f"unitary_min_{label}", entry["min_off_singularities"], 0.0, ">")
            log.check(f"unitary_mass_{label}", abs(moments["mass"] - 1.0), 1e-4)
            log.check(f"unitary_mean_{label}", abs(moments["mean"]), 1e-6)
            log.check(f"unitary_second_moment_{label}", abs(moments["second_moment"] - t * t), 1e-3)
            log.check(f"unitary_transport_{label}", entry["transport"], 1e-3)
            data[label] = entry
        return data

    # jumprate

    def jumprate(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Jump Rate"""

        noise = config.noise
        kernel = jump_kernel(noise)
        interval = config.interval or BorelInterval(a=1.0, b=3.0)
        t = (config.times or [1.0])[0]
        finest = config.eps or 0.05
        ladder = [4.0 * finest, 2.0 * finest, finest]
        levy = truncate(noise, finest)
        xs = points_outside(interval)

        columns = {"x": xs}
        columns["q_free"] = jump_rate_profile(JumpRateMode.GROUND, lambda _: 1.0, xs, interval, levy)
        columns["q_ground"] = jump_rate_profile(
            JumpRateMode.GROUND, lambda x: kernel.density(x, t), xs, interval, levy
        )
        log.check("ground_min", float(np.min(columns["q_ground"])), -1e-12, ">=")
        quantum = isinstance(noise, CauchyNoise)
        if quantum:

            def psi(x):
                return cauchy_closed_form_state(x, t)

            columns["q_quantum"] = jump_rate_profile(JumpRateMode.QUANTUM, psi, xs, interval, levy)
            columns["q_quantum_raw"] = jump_rate_profile(JumpRateMode.QUANTUM_RAW, psi, xs, interval, levy)
            log.check("quantum_min", float(np.min(columns["q_quantum"])), -1e-10, ">=")
        bundle.add_columns("jumprate.csv", list(columns), list(columns.values()))

        reports = {"ground": [], "quantum": []}
        for eps in ladder:
            rung = truncate(noise, eps)
            reports["ground"].append(
                fokker_planck_residual(
                    JumpRateMode.GROUND,
                    lambda _: (lambda x: 1.0),
                    interval,
                    rung,
                    t,
                    density=lambda time: (lambda x: kernel.density(x, time)),
                )
            )
            if quantum:
                reports["quantum"].append(
                    fokker_planck_residual(
                        JumpRateMode.QUANTUM,
                        lambda time: (lambda x: cauchy_closed_form_state(x, time)),
                        interval,
                        rung,
                        t,
                    )
                )
        fp_columns = {"eps": ladder}
        for mode, entries in reports.items():
            if not entries:
                continue
            residuals = [entry.residual for entry in entries]
            fp_columns[f"{mode}_time_derivative"] = [entry.time_derivative for entry in entries]
            fp_columns[f"{mode}_rate_integral"] = [entry.rate_integral for entry in entries]
            fp_columns[f"{mode}_residual"] = residuals
            log.check(f"{mode}_decrease", max(b / a for a, b in zip(residuals[:-1], residuals[1:])), 1.0, "<")
        if finest <= 0.05:
            log.check("ground_relative", reports["ground"][-1].relative, 5e-2)
        bundle.add_columns("fokker_planck.csv", list(fp_columns), list(fp_columns.values()))

        data = {
            "interval": interval,
            "t": t,
            "min_rates": {name: float(np.min(values)) for name, values in columns.items() if name != "x"},
            "fokker_planck": reports,
        }
        if quantum:
            data["symmetry_defect"] = rate_symmetry_defect(lambda x: cauchy_closed_form_state(x, t), interval, levy)
            log.check("symmetry_defect", abs(data["symmetry_defect"]), 1e-6)
        return data

    # acceptance

    def acceptance(self, config: ExperimentConfig, bundle: OutputBundle, log: CheckLog) -> dict:
        """Acceptance"""

        return acceptance.run_suite(log, self.threads)

