"""Tests for the uniform-epsilon threshold calculator."""

import math

import pytest

from trickle_hdx.errors import BadParams, DeltaOutOfRange
from trickle_hdx.trickledown import (
    SCENARIOS,
    coloring_scenario,
    family_scenario,
    minimal_passing_p,
    scenario_calculator,
)


class TestScenarioCalculator:
    """Conditions on the star with uniform epsilon."""

    def test_threshold_passes(self):
        p = 193
        report = scenario_calculator(2, 1 / math.sqrt(p), 1 - 2 / math.sqrt(p))
        assert report.passed
        assert report.condition1_margin == pytest.approx(0.0012983, abs=1e-6)
        assert abs(report.condition2_margin) <= 1e-12
        assert report.c == pytest.approx(1.15653, abs=1e-4)

    def test_below_threshold_fails(self):
        p = 150
        report = scenario_calculator(2, 1 / math.sqrt(p), 1 - 2 / math.sqrt(p))
        assert not report.passed
        assert report.condition1_margin < 0

    def test_default_delta_is_the_largest_feasible(self):
        report = scenario_calculator(2, 0.05)
        assert report.passed
        assert report.delta == report.delta_star
        assert report.bound_coeff == pytest.approx(
            report.c * (1 - report.delta) / report.delta
        )

    def test_infeasible_pattern(self):
        report = scenario_calculator(3, 0.6)
        assert not report.passed
        assert report.delta_star is None
        assert report.c is None

    def test_pass_alias(self):
        data = scenario_calculator(2, 0.05).model_dump(by_alias=True)
        assert "pass" in data

    @pytest.mark.parametrize(
        "kwargs,error",
        [
            ({"Delta": 0, "eps_uniform": 0.1}, BadParams),
            ({"Delta": 2, "eps_uniform": 1.0}, BadParams),
            ({"Delta": 2, "eps_uniform": 0.1, "delta": 1.2}, DeltaOutOfRange),
        ],
    )
    def test_bad_arguments(self, kwargs, error):
        with pytest.raises(error):
            scenario_calculator(**kwargs)


class TestFamilies:
    """Named parametrizations by field size."""

    def test_known_families(self):
        assert set(SCENARIOS) == {"ko", "op-abc", "op-d"}

    def test_stated_thresholds(self):
        assert family_scenario("ko", 193).passed
        assert family_scenario("op-abc", 376).passed

    def test_op_d_needs_a_larger_field(self):
        """The stated 729 is too small; 919 is the first passing size."""
        assert not family_scenario("op-d", 729).passed
        assert not family_scenario("op-d", 918).passed
        report = family_scenario("op-d", 919)
        assert report.passed
        assert report.stated_threshold == 729

    def test_minimal_p(self):
        assert minimal_passing_p("ko") == 188
        assert minimal_passing_p("op-abc") == 376
        assert minimal_passing_p("op-d") == 919

    def test_tiny_field_fails_without_error(self):
        report = family_scenario("op-d", 4)
        assert not report.passed
        assert report.family == "op-d"
        assert report.p == 4

    def test_unknown_family(self):
        with pytest.raises(BadParams):
            family_scenario("nope", 100)


class TestColoringScenario:
    """List colourings with slack eta."""

    def test_premise(self):
        result = coloring_scenario(100, 1.9)
        assert result.premise_holds
        assert result.premise_lhs == pytest.approx((1 + math.log(100)) / 100)
        assert result.delta == pytest.approx(0.95)
        assert result.scenario.Delta == 100

    def test_small_degree_breaks_the_premise(self):
        assert not coloring_scenario(2, 0.5).premise_holds

    @pytest.mark.parametrize("eta", [0.0, 2.5])
    def test_eta_range(self, eta):
        with pytest.raises(BadParams):
            coloring_scenario(10, eta)
