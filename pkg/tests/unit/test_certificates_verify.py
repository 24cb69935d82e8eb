"""Tests for certificate construction, verification and bound profiles."""

import numpy as np
import pytest

from trickle_hdx.errors import (
    BadParams,
    CertificateInvalid,
    DeltaOutOfRange,
    DenominatorNonpositive,
    SizeCap,
)
from trickle_hdx.partite import EpsilonTable, dependency_graph, epsilon_table
from trickle_hdx.trickledown import (
    ScalarVerificationReport,
    bound_profile,
    build_f_vectors,
    f_vectors_report,
    inequality_diagnostics,
    max_feasible_delta,
    verify_matrix_conditions,
    verify_scalar_conditions,
)
from trickle_hdx.trickledown.verify import psd_residual
from trickle_hdx.zoo import complete_partite_complex, hardcore_complex
from tests.conftest import star_table


def certificate_at_half(X):
    """Epsilon table, graph and f-vectors at half the largest feasible delta."""
    eps = epsilon_table(X)
    G = dependency_graph(eps)
    delta_star = max_feasible_delta(eps, G)
    assert delta_star is not None
    return eps, G, build_f_vectors(eps, G, delta_star / 2)


class TestBuildFVectors:
    """The g, h and f tables on the Delta = 2 star."""

    def test_tables(self, ko_star):
        eps, G, delta = ko_star
        e = eps.value(0, 1)
        c = 1 + delta / 2
        fv = build_f_vectors(eps, G, delta)
        assert fv.Delta == 2
        assert fv.c == pytest.approx(c)
        assert fv.g[(0, 1, 1)] == 1.0
        assert fv.g[(0, 1, 2)] == pytest.approx(1 + 1.3 * e)
        h1 = 1 + 1.3 * e
        assert fv.h[(0, 1)] == pytest.approx(h1)
        assert fv.h[(0, 2)] == pytest.approx(h1 / (1 - 2 * c * e))

    def test_f_vectors(self, ko_star):
        eps, G, delta = ko_star
        e = eps.value(0, 1)
        fv = build_f_vectors(eps, G, delta)
        assert fv.value([], 0) == pytest.approx(2 * e * fv.h[(0, 2)])
        assert fv.value([], 1) == pytest.approx(e * (1 + 1.3 * e))
        assert fv.vector([0]) == {1: 0.0, 2: 0.0}
        assert fv.value([1], 0) == pytest.approx(e)
        assert fv.value([1], 2) == pytest.approx(e)

    def test_disconnected_sum(self):
        """Two independent edges: f on the union is the sum of the parts."""
        table = EpsilonTable.declared(range(4), {(0, 1): 0.05, (2, 3): 0.02})
        G = dependency_graph(table)
        fv = build_f_vectors(table, G, 0.5)
        assert fv.vector([]) == {0: 0.05, 1: 0.05, 2: 0.02, 3: 0.02}

    def test_denominator_exhausted(self):
        eps, G = star_table(2, 0.45)
        with pytest.raises(DenominatorNonpositive) as info:
            build_f_vectors(eps, G, 0.5)
        assert info.value.part == 0
        assert info.value.level == 2

    def test_invalid_arguments(self, ko_star):
        eps, G, _ = ko_star
        with pytest.raises(DeltaOutOfRange):
            build_f_vectors(eps, G, 1.0)
        single = EpsilonTable.declared([0], {})
        with pytest.raises(BadParams):
            build_f_vectors(single, dependency_graph(single), 0.5)

    def test_report_lists_largest_sets_first(self, ko_star):
        eps, G, delta = ko_star
        report = f_vectors_report(build_f_vectors(eps, G, delta))
        assert [entry.k for entry in report.f] == [2, 2, 2, 3]
        assert report.f[-1].S == []
        assert "0,2" in report.h

    def test_with_value_copies(self, ko_star):
        eps, G, delta = ko_star
        fv = build_f_vectors(eps, G, delta)
        bumped = fv.with_value([], 0, 9.0)
        assert bumped.value([], 0) == 9.0
        assert fv.value([], 0) != 9.0

    def test_sweep_cap(self, ko_star):
        eps, G, delta = ko_star
        with pytest.raises(SizeCap):
            build_f_vectors(eps, G, delta, max_types=2)


class TestInequalityDiagnostics:
    """Increment inequalities behind the recursion."""

    def test_threshold_scenario(self, ko_star):
        eps, G, delta = ko_star
        fv = build_f_vectors(eps, G, delta)
        diag = inequality_diagnostics(fv, eps, G)
        assert diag.passed
        assert len(diag.g_increments) == 4
        assert [m.part for m in diag.h_increments] == [0]
        assert abs(diag.neighbor_sums["0"]) <= 1e-12


class TestScalarVerification:
    """Sum rule, cap, recursion and base checks."""

    def test_low_activity_hardcore(self, hardcore_low):
        eps, _, fv = certificate_at_half(hardcore_low)
        report = verify_scalar_conditions(hardcore_low, fv, eps=eps)
        assert report.passed
        assert {"cap", "base", "recursion"} <= set(report.worst)
        assert report.failures == []

    def test_low_activity_hardcore_in_dimension_three(self):
        X = hardcore_complex(3, 0.01)
        eps = epsilon_table(X)
        G = dependency_graph(eps)
        delta_star = max_feasible_delta(eps, G)
        assert delta_star == pytest.approx(0.965, abs=0.01)
        fv = build_f_vectors(eps, G, delta_star)
        scalar = verify_scalar_conditions(X, fv, eps=eps)
        assert scalar.passed, scalar.failures[:3]
        matrix = verify_matrix_conditions(X, fv, eps=eps)
        assert matrix.passed, matrix.failures[:3]

    def test_product_complex_uses_the_sum_rule(self, complete_tripartite):
        _, _, fv = certificate_at_half(complete_tripartite)
        report = verify_scalar_conditions(complete_tripartite, fv)
        assert report.passed
        assert set(report.worst) == {"sum_rule", "base"}

    def test_tampered_certificate_fails(self, complete_tripartite):
        eps, _, fv = certificate_at_half(complete_tripartite)
        report = verify_scalar_conditions(
            complete_tripartite, fv.with_value([], 0, 0.5), eps=eps
        )
        assert not report.passed
        assert [c.kind for c in report.failures] == ["sum_rule"]

    def test_type_mismatch(self, complete_tripartite):
        _, _, fv = certificate_at_half(complete_partite_complex([2, 2]))
        with pytest.raises(BadParams):
            verify_scalar_conditions(complete_tripartite, fv)


class TestPsdResidual:
    """Scaled smallest eigenvalue of upper - lower."""

    def test_ordered(self):
        residual = psd_residual(np.diag([1.0, 0.0]), np.diag([2.0, 1.0]))
        assert residual == pytest.approx(0.5)

    def test_violated(self):
        assert psd_residual(np.diag([2.0, 0.0]), np.diag([1.0, 0.0])) < 0

    def test_zero_scale(self):
        assert psd_residual(np.zeros((2, 2)), np.zeros((2, 2))) == 0.0


class TestMatrixVerification:
    """Loewner checks on every link of codimension at least 2."""

    def test_complete_tripartite(self, complete_tripartite):
        _, _, fv = certificate_at_half(complete_tripartite)
        report = verify_matrix_conditions(complete_tripartite, fv, per_face=True)
        assert report.passed
        assert report.faces_checked == 7
        assert {f.branch for f in report.faces} == {"product"}

    def test_low_activity_hardcore(self, hardcore_low):
        _, _, fv = certificate_at_half(hardcore_low)
        report = verify_matrix_conditions(hardcore_low, fv, per_face=True)
        assert report.passed
        assert report.worst_rho_margin >= -1e-8
        assert report.max_expectation_gap <= 1e-12
        assert {"recursive", "base"} <= {f.branch for f in report.faces}
        for face in report.faces:
            assert face.lambda2 <= face.rho + 1e-8

    def test_workers_do_not_change_the_report(self, hardcore_low):
        _, _, fv = certificate_at_half(hardcore_low)
        one = verify_matrix_conditions(hardcore_low, fv)
        many = verify_matrix_conditions(hardcore_low, fv, workers=4)
        assert one == many

    def test_memoized_links_do_not_change_the_report(self, hardcore_low):
        _, _, fv = certificate_at_half(hardcore_low)
        plain = verify_matrix_conditions(hardcore_low, fv, per_face=True)
        memoized = verify_matrix_conditions(
            hardcore_low, fv, per_face=True, workers=4, memoize=True
        )
        assert memoized == plain
        assert hardcore_low.memoized_faces >= plain.faces_checked

    def test_sweep_cap(self, hardcore_low):
        _, _, fv = certificate_at_half(hardcore_low)
        with pytest.raises(SizeCap):
            verify_matrix_conditions(hardcore_low, fv, max_types=3)


class TestBoundProfile:
    """Exact gamma_k next to the certified and closed-form bounds."""

    def test_certified_bounds_hold(self, hardcore_low):
        eps, _, fv = certificate_at_half(hardcore_low)
        profile = bound_profile(hardcore_low, fv, eps=eps)
        assert [row.k for row in profile.rows] == [2, 3, 4]
        for row in profile.rows:
            assert row.exact <= row.certified + 1e-8
            assert row.main is not None
        assert profile.worst_certified_slack >= -1e-8

    def test_failed_scalar_report_is_rejected(self, hardcore_low):
        eps, _, fv = certificate_at_half(hardcore_low)
        with pytest.raises(CertificateInvalid):
            bound_profile(
                hardcore_low, fv, scalar_report=ScalarVerificationReport(passed=False)
            )
