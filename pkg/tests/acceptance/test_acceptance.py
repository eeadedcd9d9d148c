from levy_bridge.acceptance import ACCEPTANCE_SUITE, characteristic_function, density_law, run_suite
from levy_bridge.checks import CheckLog


class TestAcceptanceSuite:
    """Test Acceptance Suite"""

    # Acceptance Suite Happy Path

    def test_that_suite_should_name_every_criterion_once(self):
        names = [name for name, _ in ACCEPTANCE_SUITE]

        assert len(names) == len(set(names)) == 12

    def test_that_density_law_should_pass(self):
        log = CheckLog()

        data = density_law(log)

        assert log.passed
        assert sorted(data) == ["0.5", "1", "3"]

    def test_that_characteristic_function_identities_should_hold(self):
        log = CheckLog()

        characteristic_function(log)

        assert log.passed
        assert [r.name for r in log.results] == ["transform", "initial_ratio", "time_ratio"]

    def test_that_selected_criteria_should_merge_in_suite_order(self):
        log = CheckLog(prefix="acceptance")

        data = run_suite(log, threads=2, names=["bernstein_symmetry", "nonmarkov_witness"])

        assert list(data) == ["nonmarkov_witness", "bernstein_symmetry"]
        assert log.passed
        assert log.results[0].name.startswith("acceptance.nonmarkov_witness.")
        assert log.results[-1].name == "acceptance.bernstein_symmetry.transport_l1"

    def test_that_an_empty_selection_should_run_nothing(self):
        log = CheckLog()

        assert run_suite(log, threads=1, names=[]) == {}
        assert log.passed

    # Acceptance Suite Sad Path

    def test_that_configured_tolerances_should_tighten_criteria(self):
        log = CheckLog({"nonmarkov_witness.abs_M": 1e12})

        run_suite(log, threads=1, names=["nonmarkov_witness"])

        assert not log.passed
        assert log.first_failure == "nonmarkov_witness.abs_M"

