import math

import numpy as np
import pytest

from levy_bridge.common import JumpRateMode, JumpSide
from levy_bridge.exceptions import InsufficientSamplesError, LevyBridgeValidationError, NodalRegionError
from levy_bridge.jumps import (
    cauchy_truncated_exponent,
    compensated,
    discretize_measure,
    empirical_vs_analytic,
    fokker_planck_residual,
    free_cauchy_density,
    free_jump_rate,
    jump_rate_q,
    levy_density,
    levy_exponent,
    panel_jump_rate,
    path_generator,
    points_outside,
    poisson_char_fn,
    poisson_series_char_fn,
    rate_symmetry_defect,
    sample_jump_sizes,
    sample_path,
    simulate_ensemble,
    truncate,
    truncated_exponent,
)
from levy_bridge.quantum import cauchy_closed_form_state
from levy_bridge.schemas import (
    BorelInterval,
    CauchyNoise,
    GaussianNoise,
    PoissonSpec,
    RelativisticKernel,
    RelativisticNoise,
)


class TestLevyMeasure:
    """Test Levy Measure"""

    # Levy Measure Happy Path

    def test_that_cauchy_density_should_be_inverse_square(self):
        assert levy_density(CauchyNoise(), 2.0) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-15)

    def test_that_relativistic_density_should_fall_below_cauchy(self):
        y = np.array([0.1, 1.0, 5.0])

        assert np.all(levy_density(RelativisticNoise(m=1.0), y) < levy_density(CauchyNoise(), y))

    def test_that_cauchy_truncation_should_have_closed_form_rate(self):
        levy = truncate(CauchyNoise(), 0.1)

        assert levy.lambda_eps == pytest.approx(2.0 / (0.1 * math.pi), rel=1e-15)
        assert levy.b_eps == 0.0

    @pytest.mark.parametrize("side,sign", [(JumpSide.POSITIVE, 1.0), (JumpSide.NEGATIVE, -1.0)])
    def test_that_one_sided_truncation_should_carry_a_compensator(self, side: JumpSide, sign: float):
        levy = truncate(CauchyNoise(), 0.1, side)

        assert levy.lambda_eps == pytest.approx(1.0 / (0.1 * math.pi), rel=1e-15)
        assert levy.b_eps == pytest.approx(sign * math.log1p(100.0) / (2.0 * math.pi), rel=1e-15)

    def test_that_light_relativistic_truncation_should_approach_cauchy(self):
        relativistic = truncate(RelativisticNoise(m=0.01), 0.1).lambda_eps
        cauchy = truncate(CauchyNoise(), 0.1).lambda_eps

        assert relativistic < cauchy
        assert relativistic == pytest.approx(cauchy, rel=1e-2)

    # Levy Measure Sad Path

    def test_that_density_should_reject_the_origin(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            levy_density(CauchyNoise(), np.array([0.0, 1.0]))

        assert e.value.message == "y must be nonzero"

    def test_that_truncation_should_reject_gaussian_noise(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            truncate(GaussianNoise(), 0.1)

        assert e.value.message == "kind must be pure-jump: found gaussian"

    def test_that_truncation_should_reject_non_positive_eps(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            truncate(CauchyNoise(), 0.0)

        assert e.value.message == "eps must be > 0: found 0.0"


class TestCharacteristicExponents:
    """Test Characteristic Exponents"""

    # Exponents Happy Path

    @pytest.mark.parametrize("p", [0.5, 1.0, 3.0])
    def test_that_cauchy_truncated_exponent_should_match_quadrature(self, p: float):
        numeric = truncated_exponent(CauchyNoise(), 0.1, p)

        assert abs(numeric - cauchy_truncated_exponent(p, 0.1)) < 1e-7

    def test_that_truncated_exponent_should_approach_minus_abs_p(self):
        assert cauchy_truncated_exponent(2.0, 1e-6) == pytest.approx(-2.0, abs=1e-5)

    def test_that_exponent_should_vanish_at_zero_momentum(self):
        assert truncated_exponent(RelativisticNoise(), 0.1, 0.0) == 0j

    def test_that_one_sided_exponents_should_be_conjugate(self):
        positive = truncated_exponent(CauchyNoise(), 0.1, 1.3, side=JumpSide.POSITIVE)
        negative = truncated_exponent(CauchyNoise(), 0.1, 1.3, side=JumpSide.NEGATIVE)

        assert abs(positive - np.conj(negative)) < 1e-12
        assert abs(positive + negative - truncated_exponent(CauchyNoise(), 0.1, 1.3)) < 1e-10

    def test_that_levy_exponent_should_use_the_closed_form_for_symmetric_cauchy(self):
        p = np.array([0.5, 1.0])

        exponent = levy_exponent(truncate(CauchyNoise(), 0.1), p)

        assert np.array_equal(exponent, cauchy_truncated_exponent(p, 0.1).astype(complex))

    def test_that_single_poisson_atom_should_match_its_series(self):
        spec = PoissonSpec(lambdas=[2.0], sizes=[0.7], shifts=[0.0])
        p = np.linspace(-4.0, 4.0, 17)

        assert np.max(np.abs(poisson_char_fn(spec, p) - poisson_series_char_fn(2.0, 0.7, p))) < 1e-12

    def test_that_poisson_char_fn_should_be_one_at_the_origin(self):
        spec = PoissonSpec(lambdas=[1.0, 3.0], sizes=[0.5, -2.0], shifts=[0.1, 0.0])

        assert poisson_char_fn(spec, 0.0)[0] == 1.0

    def test_that_discretized_measure_should_reproduce_the_band_limited_exponent(self):
        spec = discretize_measure(CauchyNoise(), 0.1, 10.0, 200)

        exponent = poisson_char_fn(spec, 0.5)[0]
        exact = math.exp(truncated_exponent(CauchyNoise(), 0.1, 0.5, upper=10.0).real)

        assert sum(spec.lambdas) == pytest.approx(2.0 * (10.0 - 0.1) / math.pi, rel=1e-12)
        assert abs(exponent - exact) < 1e-4

    def test_that_compensation_should_shift_each_atom(self):
        spec = compensated(PoissonSpec(lambdas=[2.0], sizes=[1.0], shifts=[0.0]))

        assert spec.shifts == [-1.0]

    # Exponents Sad Path

    def test_that_exponent_should_reject_an_upper_bound_below_eps(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            truncated_exponent(CauchyNoise(), 0.1, 1.0, upper=0.05)

        assert e.value.message == "upper must be > eps: found 0.05"

    @pytest.mark.parametrize(
        "eps,upper,n,msg",
        [
            (1.0, 0.5, 10, "must have 0 < eps < upper: found eps=1.0, upper=0.5"),
            (0.1, 1.0, 0, "n must be >= 1: found 0"),
        ],
    )
    def test_that_discretization_should_reject_bad_arguments(self, eps: float, upper: float, n: int, msg: str):
        with pytest.raises(LevyBridgeValidationError) as e:
            discretize_measure(CauchyNoise(), eps, upper, n)

        assert e.value.message == msg


class TestSimulation:
    """Test Simulation"""

    @pytest.fixture
    def levy(self):
        return truncate(CauchyNoise(), 0.1)

    # Simulation Happy Path

    def test_that_substreams_should_be_reproducible_and_distinct(self):
        first = path_generator(7, 3).random(4)

        assert np.array_equal(first, path_generator(7, 3).random(4))
        assert not np.array_equal(first, path_generator(7, 4).random(4))

    def test_that_paths_should_be_reproducible(self, levy):
        path = sample_path(levy, 1.0, seed=11, index=5)

        again = sample_path(levy, 1.0, seed=11, index=5)

        assert np.array_equal(path.jump_times, again.jump_times)
        assert np.array_equal(path.jump_sizes, again.jump_sizes)

    def test_that_path_should_jump_beyond_eps_inside_the_horizon(self, levy):
        path = sample_path(levy, 2.0, seed=1, start=3.0)

        assert np.all(np.abs(path.jump_sizes) >= 0.1)
        assert path.position(0.0) == 3.0
        assert path.position(2.0) == pytest.approx(3.0 + np.sum(path.jump_sizes))

    def test_that_cauchy_sizes_should_follow_the_pareto_tail(self, levy):
        sizes = sample_jump_sizes(levy, 20_000, path_generator(0, 0))

        assert np.mean(np.abs(sizes) > 0.2) == pytest.approx(0.5, abs=0.02)
        assert np.mean(sizes > 0) == pytest.approx(0.5, abs=0.02)

    @pytest.mark.parametrize("kind", [CauchyNoise(), RelativisticNoise(m=1.0)])
    def test_that_positive_side_should_only_jump_up(self, kind):
        levy = truncate(kind, 0.1, JumpSide.POSITIVE)

        sizes = sample_jump_sizes(levy, 500, path_generator(2, 0))

        assert sizes.size == 500
        assert np.all(sizes >= 0.1)

    def test_that_ensemble_should_not_depend_on_the_thread_count(self, levy):
        single = simulate_ensemble(levy, 1.0, 3000, seed=5, times=[0.5, 1.0], threads=1)
        pooled = simulate_ensemble(levy, 1.0, 3000, seed=5, times=[0.5, 1.0], threads=4)

        assert np.array_equal(single.positions, pooled.positions)
        assert np.array_equal(single.size_counts, pooled.size_counts)

    def test_that_ensemble_should_count_every_jump_once(self, levy):
        band = BorelInterval(a=0.5, b=2.0)

        ensemble = simulate_ensemble(levy, 1.0, 2000, seed=3, times=[1.0], band=band, threads=2)

        assert ensemble.n_paths == 2000
        assert int(np.sum(ensemble.size_counts)) == int(np.sum(ensemble.jump_counts))
        assert np.all(ensemble.band_counts <= ensemble.jump_counts)

    def test_that_empirical_law_should_match_the_free_cauchy_law(self):
        levy = truncate(CauchyNoise(), 0.01)
        ensemble = simulate_ensemble(levy, 1.0, 20_000, seed=42, times=[1.0], threads=4)

        report = empirical_vs_analytic(ensemble, 1.0)

        assert report.l1_error < 0.1
        assert report.charfn_deviation < report.charfn_bound

    # Simulation Sad Path

    def test_that_path_should_reject_a_non_positive_horizon(self, levy):
        with pytest.raises(LevyBridgeValidationError) as e:
            sample_path(levy, 0.0, seed=0)

        assert e.value.message == "T must be > 0: found 0.0"

    @pytest.mark.parametrize(
        "n_paths,times,msg",
        [
            (0, [1.0], "n_paths must be >= 1: found 0"),
            (10, [2.0], "times must lie in [0, 1.0]: found [2.0]"),
        ],
    )
    def test_that_ensemble_should_reject_bad_arguments(self, levy, n_paths: int, times, msg: str):
        with pytest.raises(LevyBridgeValidationError) as e:
            simulate_ensemble(levy, 1.0, n_paths, seed=0, times=times, threads=1)

        assert e.value.message == msg

    def test_that_empirical_comparison_should_require_enough_paths(self, levy):
        ensemble = simulate_ensemble(levy, 1.0, 3000, seed=0, times=[1.0], threads=2)

        with pytest.raises(InsufficientSamplesError) as e:
            empirical_vs_analytic(ensemble, 1.0)

        assert e.value.message == "at least 10000 paths are required: found 3000"


class TestJumpRates:
    """Test Jump Rates"""

    @pytest.fixture
    def levy(self):
        return truncate(CauchyNoise(), 0.1)

    @pytest.fixture
    def interval(self) -> BorelInterval:
        return BorelInterval(a=-1.0, b=1.0)

    # Jump Rates Happy Path

    @pytest.mark.parametrize("x,expected", [(2.0, 2.0 / (3.0 * math.pi)), (0.0, -2.0 / math.pi)])
    def test_that_free_rate_should_match_its_closed_form(self, levy, interval: BorelInterval, x: float, expected):
        assert free_jump_rate(x, interval, levy) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("x", [-3.0, -0.95, 0.4, 1.05, 2.5])
    def test_that_flat_ground_rate_should_match_the_free_rate(self, levy, interval: BorelInterval, x: float):
        numeric = jump_rate_q(JumpRateMode.GROUND, lambda _: 1.0, x, interval, levy)

        assert numeric == pytest.approx(free_jump_rate(x, interval, levy), rel=1e-8)

    @pytest.mark.parametrize("x", [-3.0, -0.95, 0.0, 0.4, 1.05, 2.5])
    def test_that_panel_rate_of_a_flat_field_should_match_the_free_rate(self, levy, interval: BorelInterval, x: float):
        numeric = panel_jump_rate(JumpRateMode.GROUND, lambda _: 1.0, x, interval, levy)

        assert numeric == pytest.approx(free_jump_rate(x, interval, levy), rel=1e-9)

    @pytest.mark.parametrize("x", [-2.5, 0.3, 1.5])
    def test_that_panel_rate_should_agree_with_the_adaptive_rate(self, interval: BorelInterval, x: float):
        def psi(y):
            return cauchy_closed_form_state(y, 1.0)

        def theta(y):
            return RelativisticKernel(m=1.0).density(y, 1.0)

        cauchy, relativistic = truncate(CauchyNoise(), 0.05), truncate(RelativisticNoise(m=1.0), 0.05)

        for mode, field, levy in (
            (JumpRateMode.QUANTUM, psi, cauchy),
            (JumpRateMode.QUANTUM_RAW, psi, cauchy),
            (JumpRateMode.GROUND, theta, relativistic),
        ):
            adaptive = jump_rate_q(mode, field, x, interval, levy)
            assert panel_jump_rate(mode, field, x, interval, levy) == pytest.approx(adaptive, rel=1e-6, abs=1e-10)

    def test_that_quantum_rate_of_a_positive_field_should_equal_the_ground_rate(self, levy, interval: BorelInterval):
        def field(x):
            return math.exp(-x * x / 4.0)

        quantum = jump_rate_q(JumpRateMode.QUANTUM, field, 2.0, interval, levy)
        ground = jump_rate_q(JumpRateMode.GROUND, field, 2.0, interval, levy)

        assert quantum == pytest.approx(ground, rel=1e-12)
        assert jump_rate_q(JumpRateMode.QUANTUM_RAW, field, 2.0, interval, levy) == 0.0

    def test_that_points_outside_should_keep_their_distance(self, interval: BorelInterval):
        xs = points_outside(interval, count=50, gap=0.1)

        assert xs.size == 50
        assert np.all(np.abs(xs) >= 1.1 - 1e-12)
        assert np.all(np.abs(xs) <= 10.0)

    def test_that_rates_of_an_even_measure_should_balance(self, levy):
        def field(x):
            return math.exp(-x * x / 2.0)

        defect = rate_symmetry_defect(field, BorelInterval(a=-0.5, b=1.5), levy, reach=20.0)

        assert abs(defect) < 1e-6

    def test_that_free_cauchy_mass_should_follow_the_truncated_rates(self, levy, interval: BorelInterval):
        fine = truncate(CauchyNoise(), 0.01)

        report = fokker_planck_residual(
            JumpRateMode.GROUND, lambda _: (lambda x: 1.0), interval, fine, 1.0, density=free_cauchy_density
        )

        assert report.time_derivative == pytest.approx(-1.0 / math.pi, rel=1e-5)
        assert report.relative < 5e-2

    # Jump Rates Sad Path

    def test_that_rate_should_refuse_nodes_of_the_field(self, levy, interval: BorelInterval):
        with pytest.raises(NodalRegionError) as e:
            jump_rate_q(JumpRateMode.GROUND, lambda _: 0.0, 2.0, interval, levy)

        assert e.value.message == "field vanishes at x=2.0"

    def test_that_points_outside_should_need_room(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            points_outside(BorelInterval(a=-10.0, b=10.0))

        assert e.value.message == "no room outside [-10.0, 10.0] within reach 10.0"

    def test_that_residual_should_reject_steps_beyond_the_time(self, levy, interval: BorelInterval):
        with pytest.raises(LevyBridgeValidationError) as e:
            fokker_planck_residual(JumpRateMode.QUANTUM, lambda _: (lambda x: 1.0), interval, levy, 1e-3)

        assert e.value.message == "need 0 < dt < t: found t=0.001, dt=0.001"

    def test_that_ground_residual_should_require_a_density(self, levy, interval: BorelInterval):
        with pytest.raises(LevyBridgeValidationError) as e:
            fokker_planck_residual(JumpRateMode.GROUND, lambda _: (lambda x: 1.0), interval, levy, 1.0)

        assert e.value.message == "ground mode requires an explicit density"
