import math

import numpy as np
import pytest

from levy_bridge.exceptions import LevyBridgeValidationError, PoleProximityError
from levy_bridge.markov_diag import (
    characteristic_multiplier,
    denominator_zeros,
    find_nonmarkov_witness,
    h_profile,
    h_ratio,
    pd_matrix_min_eigenvalue,
    random_pd_trials,
    ratio_kernel,
    two_point_violation,
)
from levy_bridge.schemas import RatioKernel


class TestRatioKernel:
    """Test Ratio Kernel"""

    # Ratio Kernel Happy Path

    def test_that_ratio_should_be_one_at_the_origin(self):
        assert ratio_kernel(RatioKernel(s=1.0, t=2.0))(0.0) == 1.0

    def test_that_ratio_should_be_even_in_p(self):
        p = np.array([0.3, 1.1, 4.2])

        assert np.max(np.abs(h_ratio(p, 1.0, 2.0) - h_ratio(-p, 1.0, 2.0))) == 0.0

    @pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
    def test_that_denominator_should_vanish_at_its_zeros(self, s: float):
        zeros = denominator_zeros(s, 4)

        assert len(zeros) == 4
        assert np.all(np.diff(zeros) > 0)
        assert zeros[0] == pytest.approx((math.atan(1.0 / s) + math.pi / 2.0) / s, rel=1e-15)

    @pytest.mark.parametrize("s,count", [(1.0, 10_000), (1e-3, 100), (0.05, 2_000)])
    def test_that_far_zeros_should_survive_rounding_in_s_times_p(self, s: float, count: int):
        zeros = denominator_zeros(s, count)

        assert len(zeros) == count
        assert np.all(np.diff(zeros) > 0)
        assert np.allclose(np.diff(zeros), math.pi / s, rtol=1e-9)

    def test_that_first_zero_at_unit_s_should_be_three_quarters_pi(self):
        assert denominator_zeros(1.0, 1)[0] == pytest.approx(0.75 * math.pi, rel=1e-15)

    def test_that_profile_should_drop_points_next_to_poles(self):
        p, h = h_profile(1.0, 2.0, 0.0, 10.0)

        assert p.size == h.size
        assert np.all(np.isfinite(h))
        assert np.max(np.abs(h)) > 1.0

    # Ratio Kernel Sad Path

    @pytest.mark.parametrize("s,t", [(2.0, 1.0), (1.0, 1.0), (0.0, 1.0)])
    def test_that_ratio_should_reject_unordered_times(self, s: float, t: float):
        with pytest.raises(LevyBridgeValidationError) as e:
            h_ratio(1.0, s, t)

        assert e.value.message == f"times must satisfy 0 < s < t: found s={s}, t={t}"

    def test_that_ratio_should_refuse_a_denominator_zero(self):
        zero = denominator_zeros(1.0, 1)[0]

        with pytest.raises(PoleProximityError) as e:
            h_ratio(zero, 1.0, 2.0)

        assert e.value.message == "h(p, 1.0, 2.0) evaluated within 1e-12 of a denominator zero"

    @pytest.mark.parametrize(
        "s,count,msg",
        [
            (0.0, 1, "s must be > 0: found 0.0"),
            (1.0, 0, "count must be >= 1: found 0"),
        ],
    )
    def test_that_zeros_should_reject_bad_arguments(self, s: float, count: int, msg: str):
        with pytest.raises(LevyBridgeValidationError) as e:
            denominator_zeros(s, count)

        assert e.value.message == msg

    def test_that_profile_should_reject_an_empty_range(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            h_profile(1.0, 2.0, 5.0, 5.0)

        assert e.value.message == "p_max must be > p_min: found [5.0, 5.0]"


class TestBochnerDiagnostics:
    """Test Bochner Diagnostics"""

    # Witness Happy Path

    def test_that_witness_should_sit_next_to_the_first_zero(self):
        witness = find_nonmarkov_witness(1.0, 2.0)

        assert witness.zero_index == 0
        assert witness.offset == 1e-4
        assert abs(abs(witness.p1 - witness.p2) - 0.75 * math.pi) < 1e-3
        assert abs(witness.M) > 10.0
        assert witness.min_eigenvalue < 0

    def test_that_witness_should_exist_for_other_times(self):
        witness = find_nonmarkov_witness(0.5, 1.7)

        assert abs(witness.M) > 1.0
        assert witness.min_eigenvalue < 0

    def test_that_two_point_matrix_should_lose_positivity_at_the_witness(self):
        witness = find_nonmarkov_witness(1.0, 2.0)

        violation = two_point_violation(witness.p1, witness.p2, 1.0, 2.0)

        assert violation.violated
        assert violation.det < 0

    def test_that_ratio_should_diverge_toward_the_pole(self):
        zero = denominator_zeros(1.0, 1)[0]
        offsets = [1e-2 / 2**k for k in range(5)]

        magnitudes = [abs(h_ratio(zero - offset, 1.0, 2.0)) for offset in offsets]

        assert all(later > earlier for earlier, later in zip(magnitudes, magnitudes[1:]))

    # Positive Definiteness Happy Path

    def test_that_inverse_linear_multiplier_should_be_positive_definite(self):
        assert random_pd_trials(lambda p: 1.0 / (1.0 + np.abs(p)), trials=50) >= -1e-12

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_that_characteristic_multiplier_should_be_positive_definite(self, t: float):
        assert random_pd_trials(lambda p: characteristic_multiplier(p, t), trials=100, max_points=8) >= -1e-10

    def test_that_multiplier_should_be_one_at_the_origin(self):
        assert characteristic_multiplier(0.0, 1.5) == 1.0

    def test_that_identity_kernel_should_have_unit_eigenvalues(self):
        assert pd_matrix_min_eigenvalue(lambda p: np.where(p == 0.0, 1.0, 0.0), [0.0, 1.0, 2.0]) == pytest.approx(1.0)

    # Positive Definiteness Sad Path

    def test_that_two_point_test_should_reject_equal_points(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            two_point_violation(1.0, 1.0, 1.0, 2.0)

        assert e.value.message == "p1 must differ from p2: found 1.0"

    @pytest.mark.parametrize("points", [[0.0], list(range(17))])
    def test_that_matrix_test_should_reject_bad_point_counts(self, points):
        with pytest.raises(LevyBridgeValidationError) as e:
            pd_matrix_min_eigenvalue(lambda p: np.ones_like(p), points)

        assert e.value.message == f"number of points must lie in [2, 16]: found {len(points)}"

    def test_that_multiplier_should_reject_non_positive_time(self):
        with pytest.raises(LevyBridgeValidationError) as e:
            characteristic_multiplier(1.0, 0.0)

        assert e.value.message == "t must be > 0: found 0.0"

    @pytest.mark.parametrize(
        "trials,max_points,msg",
        [
            (0, 8, "trials must be >= 1: found 0"),
            (10, 1, "max_points must lie in [2, 16]: found 1"),
        ],
    )
    def test_that_random_trials_should_reject_bad_arguments(self, trials: int, max_points: int, msg: str):
        with pytest.raises(LevyBridgeValidationError) as e:
            random_pd_trials(lambda p: np.ones_like(p), trials=trials, max_points=max_points)

        assert e.value.message == msg
