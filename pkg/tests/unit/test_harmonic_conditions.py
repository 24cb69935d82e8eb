"""Tests for harmonic tails and the trickle-down conditions."""

import math

import pytest

from tests.conftest import star_table
from trickle_hdx.errors import DeltaOutOfRange, IndexOutOfRange, SizeCap
from trickle_hdx.partite import EpsilonTable, dependency_graph
from trickle_hdx.trickledown import (
    Ordering,
    Variant,
    check_averaged_conditions,
    check_conditions,
    check_delta_uniform_conditions,
    check_main_conditions,
    delta_sweep,
    harmonic,
    harmonic_tail,
    max_feasible_delta,
    per_link_conditions,
)
from trickle_hdx.trickledown.harmonic import harmonic_floor


class TestHarmonic:
    """H_n and H_n(i)."""

    def test_values(self):
        assert harmonic(0) == 0.0
        assert harmonic(3) == pytest.approx(11 / 6)

    def test_tail_convention(self):
        assert harmonic_tail(3, 0) == harmonic_tail(3, 1) == pytest.approx(11 / 6)
        assert harmonic_tail(3, 2) == pytest.approx(5 / 6)
        assert harmonic_tail(3, 3) == pytest.approx(1 / 3)
        assert harmonic_tail(0, 0) == 0.0

    def test_floor(self):
        assert harmonic_floor(0) == 1.0
        assert harmonic_floor(2) == pytest.approx(1.5)

    @pytest.mark.parametrize("n,i", [(2, 3), (-1, 0), (2, -1)])
    def test_tail_out_of_range(self, n, i):
        with pytest.raises(IndexOutOfRange):
            harmonic_tail(n, i)

    def test_negative_harmonic(self):
        with pytest.raises(IndexOutOfRange):
            harmonic(-1)


def skewed_star():
    """Centre 0 with neighbours at eps 0.3, 0.2 and 0.1."""
    table = EpsilonTable.declared(range(4), {(0, 1): 0.3, (0, 2): 0.2, (0, 3): 0.1})
    return table, dependency_graph(table)


class TestMainConditions:
    """Degree-weighted main conditions."""

    def test_threshold_scenario_passes(self, ko_star):
        eps, G, delta = ko_star
        report = check_main_conditions(eps, G, delta)
        assert report.passed
        assert abs(report.worst_condition2) <= 1e-12
        assert report.worst_condition1 == pytest.approx(0.0012983, abs=1e-6)
        assert report.max_degree == 2

    def test_smaller_field_fails(self):
        p = 150
        eps, G = star_table(2, 1 / math.sqrt(p))
        report = check_main_conditions(eps, G, 1 - 2 / math.sqrt(p))
        assert not report.passed
        assert not report.condition1_passed

    def test_ordering_changes_condition2(self):
        """Weights H_2(0), H_2(1), H_2(2) = 3/2, 3/2, 1/2."""
        eps, G = skewed_star()
        dec = check_main_conditions(eps, G, 0.1)
        inc = check_main_conditions(eps, G, 0.1, Ordering.INCREASING)
        assert dec.parts[0].load2 == pytest.approx(0.8)
        assert inc.parts[0].load2 == pytest.approx(0.6)
        assert dec.parts[0].load1 == pytest.approx(0.3 * 1.5)

    def test_degree_one_part_has_no_condition2_load(self):
        """H_0(0) = 0, so a single neighbour adds nothing to condition 2."""
        eps, G = skewed_star()
        leaf = check_main_conditions(eps, G, 0.1).parts[1]
        assert leaf.degree == 1
        assert leaf.load2 == 0.0

    def test_serializes_pass_alias(self, ko_star):
        eps, G, delta = ko_star
        data = check_main_conditions(eps, G, delta).model_dump(by_alias=True)
        assert data["pass"] is True

    @pytest.mark.parametrize("delta", [0.0, 1.0, -0.2])
    def test_delta_out_of_range(self, ko_star, delta):
        eps, G, _ = ko_star
        with pytest.raises(DeltaOutOfRange):
            check_main_conditions(eps, G, delta)


class TestOtherVariants:
    """Averaged and max-degree variants."""

    def test_averaged_uses_all_parts(self):
        eps, _ = skewed_star()
        report = check_averaged_conditions(eps, 0.1)
        assert report.max_degree == 3
        assert report.parts[0].load1 == pytest.approx(0.3 * harmonic(3))
        expected = (
            0.3 * harmonic_tail(3, 0)
            + 0.2 * harmonic_tail(3, 1)
            + 0.1 * harmonic_tail(3, 2)
        )
        assert report.parts[0].load2 == pytest.approx(expected)

    def test_delta_uniform_treats_zero_degree_as_one(self):
        eps = EpsilonTable.declared(range(3), {})
        report = check_delta_uniform_conditions(eps, dependency_graph(eps), 0.5)
        assert report.passed
        assert all(p.load1 == 0.0 and p.load2 == 0.0 for p in report.parts)

    def test_delta_uniform_loads(self, ko_star):
        eps, G, _ = ko_star
        report = check_delta_uniform_conditions(eps, G, 0.5)
        gamma2 = eps.gamma2
        assert report.parts[0].load1 == pytest.approx(gamma2 * (1 + math.log(2)))
        assert report.parts[0].load2 == pytest.approx(gamma2 * (2 + math.log(2)))

    def test_dispatch(self, ko_star):
        eps, G, delta = ko_star
        for variant in Variant:
            assert check_conditions(variant, eps, G, delta).variant == variant


class TestFeasibleDelta:
    """Largest passing delta and sweeps."""

    def test_threshold_scenario_snaps_to_ceiling(self, ko_star):
        eps, G, delta = ko_star
        assert max_feasible_delta(eps, G) == pytest.approx(delta, abs=1e-9)

    def test_zero_table_reaches_the_top(self):
        eps = EpsilonTable.declared(range(3), {})
        best = max_feasible_delta(eps, dependency_graph(eps), precision=1e-6)
        assert best == pytest.approx(1 - 1e-6)

    def test_infeasible(self):
        eps, G = star_table(2, 0.5)
        assert max_feasible_delta(eps, G) is None

    def test_sweep_keeps_failures(self, ko_star):
        eps, G, _ = ko_star
        reports = delta_sweep(eps, G, [0.5, 0.85, 0.95])
        assert [r.passed for r in reports] == [False, True, False]

    def test_per_link_keys(self, ko_star):
        eps, G, delta = ko_star
        reports = per_link_conditions(eps, G, delta)
        assert set(reports) == {"", "0", "1", "2"}
        assert reports["0"].max_degree == 0
        assert reports[""].passed

    def test_per_link_sweep_cap(self, ko_star):
        eps, G, delta = ko_star
        with pytest.raises(SizeCap):
            per_link_conditions(eps, G, delta, max_types=2)
