import math

import numpy as np
import pytest

from levy_bridge.exceptions import LevyBridgeValidationError, SingularPointError
from levy_bridge.kernels import (
    UnitaryTransitionKernel,
    bernstein_closed_form,
    bernstein_density,
    bessel_k1,
    cauchy_unitary_transition,
    chapman_kolmogorov_residual,
    g_exact,
    g_table,
    k1_asymptotic,
    k1_integral,
    k1_series,
    kernel_eval,
    kernel_field,
    kernel_mass,
    wrapped_cauchy_kernel,
)
from levy_bridge.schemas import BernsteinParams, CauchyKernel, Grid1D, HeatKernel, RelativisticKernel

KINDS = [HeatKernel(D=1.0), CauchyKernel(), RelativisticKernel(m=1.0)]


class TestSemigroupKernels:
    """Test Semigroup Kernels"""

    # Kernel Happy Path

    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("tau", [0.25, 1.0, 4.0])
    def test_that_kernel_should_have_unit_mass(self, kind, tau: float):
        assert kernel_mass(kind, tau) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("kind", KINDS)
    def test_that_kernel_should_be_positive_on_a_grid(self, kind):
        field = kernel_field(kind, 1.0, Grid1D.symmetric(50.0, 4096))

        assert np.min(field.samples) > 0

    def test_that_cauchy_kernel_should_peak_at_one_over_pi_tau(self):
        assert kernel_eval(CauchyKernel(), 0.0, 0.0, 0.0, 2.0) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-15)

    def test_that_relativistic_kernel_should_approach_cauchy_for_small_mass(self):
        light = RelativisticKernel(m=1e-6).density(0.7, 1.0)

        assert light == pytest.approx(CauchyKernel().density(0.7, 1.0), rel=1e-5)

    def test_that_kernel_should_depend_only_on_displacement_and_elapsed_time(self):
        kind = RelativisticKernel(m=0.5)

        assert kernel_eval(kind, 1.0, 0.5, 2.5, 1.5) == pytest.approx(kernel_eval(kind, 0.0, 0.0, 1.5, 1.0), rel=1e-15)

    @pytest.mark.parametrize("kind", KINDS)
    def test_that_kernel_should_satisfy_chapman_kolmogorov(self, kind):
        assert chapman_kolmogorov_residual(kind, 0.0, 0.5, 1.0) < 1e-5

    def test_that_wrapped_cauchy_kernel_should_have_unit_mass_on_the_grid(self):
        field = wrapped_cauchy_kernel(0.5, Grid1D.symmetric(10.0, 512), center=1.0)

        assert field.integral() == pytest.approx(1.0, abs=1e-12)

    # Kernel Sad Path

    @pytest.mark.parametrize("s,t", [(1.0, 1.0), (2.0, 1.0)])
    def test_that_kernel_should_reject_non_increasing_times(self, s: float, t: float):
        with pytest.raises(LevyBridgeValidationError) as e:
            kernel_eval(CauchyKernel(), 0.0, s, 0.0, t)

        assert e.value.message == f"t must be > s: found s={s}, t={t}"

    def test_that_kernel_field_should_reject_non_positive_tau(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            kernel_field(CauchyKernel(), 0.0, Grid1D.symmetric(1.0, 16))

        assert e.value.message == "tau must be > 0: found 0.0"

    def test_that_chapman_kolmogorov_should_reject_unordered_times(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            chapman_kolmogorov_residual(CauchyKernel(), 0.0, 1.0, 1.0)

        assert e.value.message == "times must satisfy s < u < t: found s=0.0, u=1.0, t=1.0"


class TestBesselK1:
    """Test Bessel K1"""

    # K1 Happy Path

    @pytest.mark.parametrize("z", [0.05, 0.3, 1.0, 2.0])
    def test_that_series_should_agree_with_the_library_function(self, z: float):
        assert abs(k1_series(z) - bessel_k1(z)) < 1e-10

    @pytest.mark.parametrize("z", [10.0, 15.0, 20.0])
    def test_that_asymptotic_expansion_should_agree_with_the_library_function(self, z: float):
        assert abs(k1_asymptotic(z) - bessel_k1(z)) < 1e-10

    @pytest.mark.parametrize("z", [0.05, 0.5, 3.0, 20.0])
    def test_that_integral_representation_should_agree_with_the_library_function(self, z: float):
        assert abs(k1_integral(z) - bessel_k1(z)) < 1e-9

    def test_that_k1_should_accept_arrays(self):
        z = np.array([0.5, 1.0])

        assert bessel_k1(z).shape == (2,)

    # K1 Sad Path

    @pytest.mark.parametrize("z", [0.0, -1.0])
    def test_that_k1_should_reject_non_positive_arguments(self, z: float):
        with pytest.raises(LevyBridgeValidationError) as e:
            bessel_k1(z)

        assert e.value.message == f"z must be > 0: found {z}"


class TestBernsteinDensity:
    """Test Bernstein Density"""

    @pytest.fixture
    def x(self) -> np.ndarray:
        return np.linspace(-10.0, 10.0, 401)

    # Bernstein Happy Path

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.9])
    def test_that_density_should_be_symmetric_in_time(self, x: np.ndarray, t: float):
        params = BernsteinParams(alpha0=1.0, D=1.0)

        assert np.max(np.abs(bernstein_density(x, -t, params) - bernstein_density(x, t, params))) < 1e-12

    @pytest.mark.parametrize("alpha0,D,t", [(1.0, 1.0, 0.3), (2.0, 0.5, -1.5), (0.5, 2.0, 0.45)])
    def test_that_density_should_match_its_closed_form(self, x: np.ndarray, alpha0: float, D: float, t: float):
        params = BernsteinParams(alpha0=alpha0, D=D)

        assert np.max(np.abs(bernstein_density(x, t, params) - bernstein_closed_form(x, t, params))) < 1e-12

    # Bernstein Sad Path

    @pytest.mark.parametrize("t", [1.0, -1.5])
    def test_that_density_should_reject_times_outside_the_window(self, x: np.ndarray, t: float):
        with pytest.raises(LevyBridgeValidationError) as e:
            bernstein_density(x, t, BernsteinParams())

        assert e.value.message == f"|t| must be < alpha0: found t={t}, alpha0=1.0"


class TestUnitaryTransitionKernel:
    """Test Unitary Transition Kernel"""

    # Unitary Kernel Happy Path

    @pytest.mark.parametrize("u", [0.5, 1.0, 3.0])
    def test_that_g_table_should_match_the_sine_cosine_integral_form(self, u: float):
        assert abs(float(g_table().g_at(u)) - float(g_exact(u))) < 1e-5

    @pytest.mark.parametrize("t", [0.5, 1.0])
    def test_that_kernel_should_have_unit_mass_zero_mean_and_ballistic_spread(self, t: float):
        moments = UnitaryTransitionKernel(t).moments()

        assert abs(moments["mass"] - 1.0) < 1e-4
        assert abs(moments["mean"]) < 1e-6
        assert abs(moments["second_moment"] - t * t) < 1e-3

    def test_that_kernel_should_be_positive_off_its_singularities(self):
        kernel = UnitaryTransitionKernel(1.0)
        field = kernel.table_field()
        regular = np.abs(field.grid.x) <= 50.0
        regular[kernel.singular_cells()] = False

        assert np.min(field.samples[regular]) > 0

    def test_that_pointwise_kernel_should_agree_with_the_table(self):
        kernel = UnitaryTransitionKernel(1.0)
        field = kernel.table_field()
        index = kernel.table.origin + kernel.table.steps(0.5)

        assert cauchy_unitary_transition(0.5, 1.0) == pytest.approx(field.samples[index], rel=1e-9)

    # Unitary Kernel Sad Path

    def test_that_kernel_should_reject_non_positive_time(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            UnitaryTransitionKernel(0.0)

        assert e.value.message == "t must be > 0: found 0.0"

    @pytest.mark.parametrize("x", [1.0, -1.0])
    def test_that_kernel_should_refuse_its_singular_points(self, x: float):
        with pytest.raises(SingularPointError) as e:
            UnitaryTransitionKernel(1.0)(x)

        assert e.value.message == "p(x, t) is singular at x = +-1.0"

    def test_that_table_field_should_reject_times_off_the_table_spacing(self):
        table = g_table()

        with pytest.raises(LevyBridgeValidationError) as e:
            UnitaryTransitionKernel(0.3).table_field()

        assert e.value.message == f"t must be a multiple of the table spacing {table.dx}: found 0.3"
