import math

import numpy as np
import pytest

from levy_bridge.bridge import free_packet, madelung_exponents
from levy_bridge.exceptions import LevyBridgeValidationError, NodalRegionError
from levy_bridge.quantum import (
    adjoint_diffusion_residual,
    cauchy_closed_form_state,
    cauchy_density,
    cauchy_initial,
    cauchy_rho_hat,
    cauchy_rho_hat_initial,
    current_velocity,
    diffusion_quantum_potential,
    exponential_action_residual,
    madelung_decompose,
    madelung_evolution_residual,
    quantum_potential,
    real_imaginary_defect,
    stationary_residual,
    sturm_liouville_potential,
    unitary_transport_defect,
    wave_equation_residual,
)
from levy_bridge.schemas import (
    BorelInterval,
    CauchyNoise,
    ComplexField,
    GaussianNoise,
    GaussianPacketParams,
    Grid1D,
    RealField,
    RelativisticNoise,
)
from levy_bridge.spectral import fourier_transform_at


class TestCauchySolution:
    """Test Cauchy Solution"""

    @pytest.fixture
    def x(self) -> np.ndarray:
        return np.linspace(-400.0, 400.0, 10_000)

    # Cauchy Solution Happy Path

    def test_that_state_at_time_zero_should_be_the_lorentzian(self, x: np.ndarray):
        assert np.max(np.abs(cauchy_closed_form_state(x, 0.0) - cauchy_initial(x))) == 0.0

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_that_squared_modulus_should_follow_the_density_law(self, x: np.ndarray, s: float):
        assert np.max(np.abs(np.abs(cauchy_closed_form_state(x, s)) ** 2 - cauchy_density(x, s))) < 1e-12

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_that_real_and_imaginary_parts_should_combine_into_the_density(self, x: np.ndarray, s: float):
        assert real_imaginary_defect(x, s) < 1e-12

    def test_that_initial_characteristic_function_should_match_the_transform(self):
        grid = Grid1D.symmetric(400.0, 16384)
        rho0 = RealField(grid=grid, samples=cauchy_density(grid.x, 0.0))
        p = np.linspace(0.0, 6.0, 25)

        assert np.max(np.abs(fourier_transform_at(rho0, p) - cauchy_rho_hat_initial(p))) < 1e-6

    @pytest.mark.parametrize("t", [0.5, 2.0])
    def test_that_characteristic_function_should_be_normalized(self, t: float):
        assert cauchy_rho_hat(0.0, t) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-15)

    def test_that_unitary_kernel_should_transport_the_initial_density(self):
        assert unitary_transport_defect(1.0) < 1e-3

    def test_that_current_of_a_boosted_packet_should_be_twice_its_momentum(self):
        grid = Grid1D.symmetric(30.0, 1024)
        psi = ComplexField(grid=grid, samples=free_packet(grid.x, 0.0, GaussianPacketParams()) * np.exp(1.5j * grid.x))

        current = current_velocity(psi, BorelInterval(a=grid.x_min, b=grid.x_max))

        assert current == pytest.approx(3.0, rel=1e-10)

    # Cauchy Solution Sad Path

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_that_characteristic_function_should_reject_non_positive_time(self, t: float):
        with pytest.raises(LevyBridgeValidationError) as e:
            cauchy_rho_hat(1.0, t)

        assert e.value.message == f"t must be > 0: found {t}"


class TestMadelung:
    """Test Madelung"""

    @pytest.fixture
    def grid(self) -> Grid1D:
        return Grid1D.symmetric(20.0, 1024)

    # Madelung Happy Path

    def test_that_decomposition_should_recover_the_packet_exponents(self, grid: Grid1D):
        params = GaussianPacketParams()
        psi = ComplexField(grid=grid, samples=free_packet(grid.x, 1.0, params))
        R, S = madelung_exponents(grid.x, 1.0, params)
        inside = np.abs(grid.x) <= 5.0

        pair = madelung_decompose(psi, window=5.0)

        assert np.max(np.abs(pair.R.samples[inside] - R[inside])) < 1e-12
        assert np.max(np.abs(pair.S.samples[inside] - S[inside])) < 1e-12

    @pytest.mark.parametrize("D", [0.5, 1.0, 2.0])
    def test_that_gaussian_quantum_potential_should_be_quadratic(self, grid: Grid1D, D: float):
        rho_sqrt = RealField(grid=grid, samples=np.exp(-np.square(grid.x) / 2.0))
        inside = np.abs(grid.x) <= 5.0

        Q = quantum_potential(rho_sqrt, GaussianNoise(D=D), window=5.0).Q.samples

        assert np.max(np.abs(Q[inside] - D * (1.0 - np.square(grid.x[inside])))) < 1e-8
        assert np.all(Q[~inside] == 0.0)

    def test_that_diffusion_quantum_potential_should_be_minus_twice_the_gaussian_potential(self, grid: Grid1D):
        rho_sqrt = RealField(grid=grid, samples=np.exp(-np.square(grid.x) / 2.0))
        inside = np.abs(grid.x) <= 5.0

        Q = diffusion_quantum_potential(rho_sqrt, 0.5, window=5.0).samples

        assert np.max(np.abs(Q[inside] - (np.square(grid.x[inside]) - 1.0))) < 1e-8

    @pytest.mark.parametrize("kind", [CauchyNoise(), RelativisticNoise(m=1.0)])
    def test_that_sturm_liouville_potential_should_make_rho_stationary(self, kind):
        grid = Grid1D.symmetric(50.0, 2048)
        rho = RealField(grid=grid, samples=cauchy_density(grid.x, 1.0))

        V = sturm_liouville_potential(rho, kind, 0.5)

        assert stationary_residual(rho, kind, V, 0.5) < 1e-10

    @pytest.mark.parametrize("t", [-0.4, 0.0, 0.3])
    def test_that_adjoint_diffusion_pair_should_solve_its_equations(self, grid: Grid1D, t: float):
        assert adjoint_diffusion_residual(GaussianPacketParams(), t, grid) < 1e-6

    @pytest.mark.parametrize("kind", [CauchyNoise(), RelativisticNoise(m=1.0)])
    def test_that_exponential_action_should_match_the_jump_remainder(self, kind):
        grid = Grid1D.symmetric(20.0, 1024)
        smooth = RealField(grid=grid, samples=np.exp(-np.square(grid.x) / 2.0))

        assert exponential_action_residual(smooth, kind, 1e-4) < 3e-3

    def test_that_cauchy_solution_should_satisfy_the_madelung_equations(self):
        grid = Grid1D.symmetric(400.0, 8192)
        times = [0.99, 1.0, 1.01]
        snapshots = [ComplexField(grid=grid, samples=cauchy_closed_form_state(grid.x, s)) for s in times]

        report = madelung_evolution_residual(snapshots, times, CauchyNoise())

        assert report.window == 10.0
        assert report.worst <= 5e-3

    def test_that_constant_phase_rotation_should_be_absorbed_by_a_constant_potential(self):
        grid = Grid1D.symmetric(400.0, 8192)
        times = [0.99, 1.0, 1.01]
        E = 0.7
        snapshots = [
            ComplexField(grid=grid, samples=np.exp(1j * E * s) * cauchy_closed_form_state(grid.x, s)) for s in times
        ]
        shift = RealField(grid=grid, samples=np.full(grid.n, -E))

        report = madelung_evolution_residual(snapshots, times, CauchyNoise(), potential=shift)

        assert report.worst <= 5e-3
        assert madelung_evolution_residual(snapshots, times, CauchyNoise()).S > 0.5

    # Madelung Sad Path

    def test_that_decomposition_should_refuse_nodes_inside_the_window(self, grid: Grid1D):
        psi = ComplexField(grid=grid, samples=grid.x * np.exp(-np.square(grid.x)))

        with pytest.raises(NodalRegionError) as e:
            madelung_decompose(psi, window=3.0)

        assert e.value.message == "amplitude falls below 1e-12 inside the evaluation region"

    def test_that_sturm_liouville_potential_should_reject_negative_densities(self, grid: Grid1D):
        with pytest.raises(LevyBridgeValidationError) as e:
            sturm_liouville_potential(RealField(grid=grid, samples=-np.ones(grid.n)), CauchyNoise(), 0.0)

        assert e.value.message == "rho must be nonnegative"

    def test_that_window_should_be_positive(self, grid: Grid1D):
        with pytest.raises(LevyBridgeValidationError) as e:
            madelung_decompose(ComplexField(grid=grid, samples=np.ones(grid.n)), window=0.0)

        assert e.value.message == "window must be > 0: found 0.0"

    @pytest.mark.parametrize(
        "times,kind,msg",
        [
            ([0.0, 0.1], CauchyNoise(), "at least 3 snapshots are required: found 2"),
            ([0.0, 0.1, 0.3], CauchyNoise(), "snapshot times must be increasing and equally spaced"),
            ([0.2, 0.1, 0.0], CauchyNoise(), "snapshot times must be increasing and equally spaced"),
            ([0.0, 0.1, 0.2], GaussianNoise(), "kind must be pure-jump: found gaussian"),
        ],
    )
    def test_that_evolution_residual_should_reject_bad_snapshots(self, grid: Grid1D, times, kind, msg: str):
        snapshots = [ComplexField(grid=grid, samples=cauchy_initial(grid.x)) for _ in times]

        with pytest.raises(LevyBridgeValidationError) as e:
            madelung_evolution_residual(snapshots, times, kind)

        assert e.value.message == msg

    def test_that_evolution_residual_should_reject_unpaired_snapshots(self, grid: Grid1D):
        snapshots = [ComplexField(grid=grid, samples=cauchy_initial(grid.x))] * 3

        with pytest.raises(LevyBridgeValidationError) as e:
            madelung_evolution_residual(snapshots, [0.0, 0.1], CauchyNoise())

        assert e.value.message == "snapshots and times must have equal length"


class TestWaveEquations:
    """Test Wave Equations"""

    @pytest.fixture
    def packet(self) -> ComplexField:
        grid = Grid1D.symmetric(100.0, 4096)
        return ComplexField(grid=grid, samples=free_packet(grid.x, 0.0, GaussianPacketParams()))

    # Wave Equations Happy Path

    @pytest.mark.parametrize("euclidean,equation", [(False, "klein-gordon"), (True, "euclidean-relativistic")])
    def test_that_relativistic_evolution_should_solve_its_wave_equation(
        self, packet: ComplexField, euclidean: bool, equation: str
    ):
        report = wave_equation_residual(RelativisticNoise(m=1.0), packet, 1.0, 1e-3, euclidean=euclidean)

        assert report.equation == equation
        assert report.relative < 1e-3

    def test_that_cauchy_evolution_should_solve_the_dalembert_equation(self):
        grid = Grid1D.symmetric(400.0, 8192)
        lorentzian = ComplexField(grid=grid, samples=cauchy_closed_form_state(grid.x, 0.0))

        report = wave_equation_residual(CauchyNoise(), lorentzian, 1.0, 1e-3)

        assert report.equation == "dalembert"
        assert report.relative < 1e-3

    # Wave Equations Sad Path

    @pytest.mark.parametrize(
        "kind,t_center,dt,euclidean,msg",
        [
            (GaussianNoise(), 1.0, 1e-3, False, "kind must be cauchy or relativistic: found gaussian"),
            (CauchyNoise(), 1.0, 0.0, False, "dt must be > 0: found 0.0"),
            (CauchyNoise(), 0.0, 1e-3, True, "t_center - dt must be >= 0: found -0.001"),
        ],
    )
    def test_that_wave_residual_should_reject_bad_input(
        self, packet: ComplexField, kind, t_center: float, dt: float, euclidean: bool, msg: str
    ):
        with pytest.raises(LevyBridgeValidationError) as e:
            wave_equation_residual(kind, packet, t_center, dt, euclidean=euclidean)

        assert e.value.message == msg
