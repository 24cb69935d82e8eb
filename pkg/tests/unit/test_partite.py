"""Tests for epsilon tables, dependency graphs and product detection."""

import math

import pytest

from trickle_hdx.complex import build_complex, link
from trickle_hdx.errors import BadParams, NotPartite, SizeCap, WrongDimension
from trickle_hdx.partite import (
    EpsilonTable,
    dependency_graph,
    epsilon_report,
    epsilon_table,
    pair,
    product_decomposition,
    rank2_product_check,
)
from trickle_hdx.zoo import complete_partite_complex, product_complex


class TestEpsilonTable:
    """Declared tables, clamping and restriction."""

    def test_declared_fills_missing_pairs(self):
        table = EpsilonTable.declared(range(3), {(1, 0): 0.2})
        assert table.raw == {(0, 1): 0.2, (0, 2): 0.0, (1, 2): 0.0}

    def test_value_clamps_at_zero(self):
        table = EpsilonTable.declared(range(2), {(0, 1): -0.5})
        assert table.raw_value(1, 0) == -0.5
        assert table.value(0, 1) == 0.0
        assert table.gamma2 == 0.0

    def test_unknown_type_rejected(self):
        with pytest.raises(BadParams):
            EpsilonTable.declared(range(2), {(0, 5): 0.1})

    def test_pair_needs_two_types(self):
        with pytest.raises(BadParams):
            pair(1, 1)

    def test_restrict(self):
        table = EpsilonTable.declared(range(3), {(0, 1): 0.1, (1, 2): 0.3})
        sub = table.restrict([1, 2])
        assert sub.types == (1, 2)
        assert sub.raw == {(1, 2): 0.3}


class TestDependencyGraph:
    """Edges where the worst link is not a 0-expander."""

    def test_threshold(self):
        table = EpsilonTable.declared(range(3), {(0, 1): 1e-12, (1, 2): 0.1})
        G = dependency_graph(table, tol=1e-9)
        assert G.edges() == [(1, 2)]
        assert G.degrees == {0: 0, 1: 1, 2: 1}
        assert G.components() == [[0], [1, 2]]

    def test_negative_tolerance_rejected(self):
        with pytest.raises(BadParams):
            dependency_graph(EpsilonTable.declared(range(2), {}), tol=-1.0)


class TestEpsilonFromComplex:
    """Measured epsilon tables."""

    def test_single_simplex_is_negative(self, triangle):
        table = epsilon_table(triangle)
        assert all(v == pytest.approx(-1.0) for v in table.raw.values())
        assert dependency_graph(table).max_degree == 0

    def test_k3_coloring(self, k3_coloring):
        """Fixing one color leaves K_{4,4} minus a matching, lambda2 = 1/3."""
        table = epsilon_table(k3_coloring)
        for value in table.raw.values():
            assert value == pytest.approx(1 / 3, abs=1e-10)

    def test_path_coloring_non_edge_is_zero(self, path_coloring):
        table = epsilon_table(path_coloring)
        assert table.raw_value(0, 2) == pytest.approx(0.0, abs=1e-10)
        assert table.raw_value(0, 1) == pytest.approx(math.sqrt(2) / 2, abs=1e-10)
        G = dependency_graph(table)
        assert G.edges() == [(0, 1), (1, 2)]
        assert G.max_degree == 2

    def test_argmax_face_has_the_other_types(self, path_coloring):
        table = epsilon_table(path_coloring)
        (vertex,) = table.argmax[(0, 1)]
        assert vertex.startswith("2:")

    def test_workers_do_not_change_the_table(self, k3_coloring):
        threaded = epsilon_table(k3_coloring, workers=4)
        assert threaded.raw == epsilon_table(k3_coloring).raw

    def test_memoized_links_do_not_change_the_table(self, k3_coloring):
        memoized = epsilon_table(k3_coloring, workers=4, memoize=True)
        assert memoized.raw == epsilon_table(k3_coloring).raw
        assert k3_coloring.memoized_faces > 0

    def test_sweep_cap(self, k3_coloring):
        with pytest.raises(SizeCap, match="sweep cap of 2"):
            epsilon_table(k3_coloring, max_types=2)

    def test_not_partite(self, triangle_boundary):
        with pytest.raises(NotPartite):
            epsilon_table(triangle_boundary)

    def test_report(self, path_coloring):
        table = epsilon_table(path_coloring)
        report = epsilon_report(table, dependency_graph(table))
        assert report.Delta.max == 2
        assert report.Delta.per_i == {"0": 1, "1": 2, "2": 1}
        assert report.components == [[0, 1, 2]]
        assert [(e.i, e.j) for e in report.eps] == [(0, 1), (0, 2), (1, 2)]
        assert report.gamma2 == pytest.approx(math.sqrt(2) / 2)


class TestProductDecomposition:
    """Factorization along dependency components."""

    def test_complete_partite_splits_into_parts(self):
        result = product_decomposition(complete_partite_complex([2, 3]))
        assert result.components == [[0], [1]]
        assert result.is_product
        assert result.residual <= 1e-12

    def test_product_of_colorings(self, path_coloring, k3_coloring):
        X = product_complex([k3_coloring, path_coloring])
        result = product_decomposition(X, strict=True)
        assert result.components == [[0, 1, 2], [3, 4, 5]]
        assert result.is_product
        assert result.choice_residual <= 1e-12

    def test_coupled_weights_are_not_a_product(self):
        """Declaring the dependency graph empty makes the check fail."""
        X = build_complex(
            [(["a0", "b0"], 1.0), (["a0", "b1"], 2.0), (["a1", "b0"], 3.0)],
            types={"a0": 0, "a1": 0, "b0": 1, "b1": 1},
        )
        eps = EpsilonTable(types=(0, 1), raw={(0, 1): 0.0})
        result = product_decomposition(X, eps=eps)
        assert result.components == [[0], [1]]
        assert not result.is_product


class TestRank2ProductCheck:
    """Singular-value test on weighted bipartite graphs."""

    def test_four_path_rejected(self):
        X = build_complex(
            [(["a", "b"], 1.0), (["c", "b"], 1.0), (["c", "d"], 1.0)],
            types={"a": 0, "c": 0, "b": 1, "d": 1},
        )
        result = rank2_product_check(X)
        assert not result.is_product
        assert result.sigma3_ratio > 0.1
        assert len(result.singular_values) == 4

    def test_cross_factor_link_accepted(self, path_coloring, k3_coloring):
        X = product_complex([k3_coloring, path_coloring])
        rest = [v for v in X.facets[0][0] if not v.startswith(("f0/0:", "f1/0:"))]
        L = link(X, rest)
        result = rank2_product_check(L)
        assert result.is_product
        assert result.sigma3_ratio <= 1e-10
        assert result.factorization_residual <= 1e-10

    def test_wrong_dimension(self, triangle):
        with pytest.raises(WrongDimension):
            rank2_product_check(triangle)
