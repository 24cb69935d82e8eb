"""Tests for weighted complexes: validation, links, distributions and products."""

import numpy as np
import pytest

from trickle_hdx.complex import (
    build_complex,
    check_sweep_size,
    connectivity_report,
    faces_of_type,
    induced_distribution,
    link,
    product,
    relabel_types,
)
from trickle_hdx.errors import (
    CodimTooSmall,
    EmptyComplex,
    FaceNotInComplex,
    GroundSetOverlap,
    LevelOutOfRange,
    NonPure,
    NonpositiveWeight,
    NotPartite,
    PartiteViolation,
    SizeCap,
)
from trickle_hdx.zoo import hardcore_complex


class TestBuildComplex:
    """Validation and canonical form of built complexes."""

    def test_single_facet(self, triangle):
        """One facet with three typed vertices is a 2-dimensional partite complex."""
        assert triangle.d == 2
        assert triangle.is_partite
        assert triangle.type_labels == (0, 1, 2)
        assert triangle.facets == [(("a", "b", "c"), 1.0)]

    def test_non_pure_rejected(self):
        with pytest.raises(NonPure):
            build_complex([(["a", "b"], 1.0), (["a", "b", "c"], 1.0)])

    def test_declared_dimension_must_match(self):
        with pytest.raises(NonPure):
            build_complex([(["a", "b"], 1.0)], d=2)

    @pytest.mark.parametrize("weight", [0.0, -1.0, float("nan"), float("inf")])
    def test_nonpositive_weight_rejected(self, weight):
        with pytest.raises(NonpositiveWeight):
            build_complex([(["a", "b"], weight)])

    def test_empty_rejected(self):
        with pytest.raises(EmptyComplex):
            build_complex([])

    def test_repeated_type_rejected(self):
        """A facet holding two vertices of one type violates the partition."""
        with pytest.raises(PartiteViolation):
            build_complex(
                [(["a", "b"], 1.0), (["a", "c"], 1.0)],
                types={"a": 0, "b": 1, "c": 0},
            )

    def test_untyped_vertex_rejected(self):
        with pytest.raises(PartiteViolation):
            build_complex([(["a", "b"], 1.0)], types={"a": 0})

    def test_duplicate_facets_merge_and_weights_normalize(self):
        X = build_complex([(["a", "b"], 1.0), (["b", "a"], 2.0), (["b", "c"], 1.0)])
        weights = dict(X.facets)
        assert weights[("a", "b")] == pytest.approx(0.75)
        assert weights[("b", "c")] == pytest.approx(0.25)
        assert X.num_facets == 2

    def test_vertex_ids_become_strings(self):
        X = build_complex([([1, 2], 1.0)])
        assert X.vertices == ("1", "2")


class TestLink:
    """Links carry the conditional facet distribution."""

    def test_link_of_empty_face_is_the_complex(self, hardcore_small):
        L = link(hardcore_small, [])
        assert [vs for vs, _ in L.facets] == [vs for vs, _ in hardcore_small.facets]
        assert L.weights == pytest.approx(hardcore_small.weights)
        assert L.type_labels == hardcore_small.type_labels

    def test_link_of_codim_one_face(self, triangle):
        L = link(triangle, ["a", "b"])
        assert L.d == 0
        assert L.facets == [(("c",), 1.0)]
        assert L.type_labels == (2,)

    def test_hardcore_path_link(self):
        """Fixing the middle parts out leaves a weighted path lam, 1, lam."""
        lam = 0.2
        X = hardcore_complex(3, lam)
        L = link(X, ["2_out", "3_out", "4_out", "5_out"])
        assert L.d == 1
        assert L.type_labels == (0, 5)
        weights = dict(L.facets)
        assert weights[("1_in", "6_out")] == pytest.approx(lam / (1 + 2 * lam))
        assert weights[("1_out", "6_in")] == pytest.approx(lam / (1 + 2 * lam))
        assert weights[("1_out", "6_out")] == pytest.approx(1 / (1 + 2 * lam))
        assert ("1_in", "6_in") not in weights

    def test_link_of_facet_rejected(self, triangle):
        with pytest.raises(CodimTooSmall):
            link(triangle, ["a", "b", "c"])

    def test_link_of_non_face_rejected(self, triangle_boundary):
        with pytest.raises(FaceNotInComplex):
            link(triangle_boundary, ["a", "z"])

    def test_memoized_link_is_reused(self, hardcore_small):
        first = link(hardcore_small, ["1_out"], memoize=True)
        assert link(hardcore_small, ["1_out"], memoize=True) is first


class TestInducedDistribution:
    """The level distributions pi_i."""

    def test_top_level_of_single_facet(self, triangle):
        dist = induced_distribution(triangle, 2)
        assert dist.weights == {("a", "b", "c"): 1.0}

    def test_uniform_triangle_vertices(self, triangle_boundary):
        dist = induced_distribution(triangle_boundary, 0)
        assert set(dist.weights) == {("a",), ("b",), ("c",)}
        for p in dist.weights.values():
            assert p == pytest.approx(1 / 3)

    def test_hardcore_vertex_marginals(self, hardcore_small):
        """With lam = 1 each of the 7 facets has weight 1/7; 1_in lies in two."""
        dist = induced_distribution(hardcore_small, 0)
        assert dist.total() == pytest.approx(1.0)
        assert dist.probability(["1_in"]) == pytest.approx((2 / 7) / 4)
        assert dist.probability(["1_out"]) == pytest.approx((5 / 7) / 4)

    def test_level_out_of_range(self, triangle):
        with pytest.raises(LevelOutOfRange):
            induced_distribution(triangle, 3)


class TestFacesOfType:
    """Projections of facets onto type sets."""

    def test_empty_type_set(self, hardcore_small):
        faces = faces_of_type(hardcore_small, [])
        assert len(faces) == 1 and faces[0].is_empty

    def test_all_types_gives_facets(self, hardcore_small):
        faces = faces_of_type(hardcore_small, hardcore_small.type_labels)
        assert len(faces) == hardcore_small.num_facets

    def test_same_side_parts_are_free(self, hardcore_small):
        """Parts 1 and 2 share a side of K_{2,2}, so all four in/out pairs occur."""
        faces = faces_of_type(hardcore_small, [0, 1])
        assert len(faces) == 4

    def test_opposite_sides_exclude_both_in(self, hardcore_small):
        faces = faces_of_type(hardcore_small, [1, 2])
        assert len(faces) == 3
        assert ("2_in", "3_in") not in [f.vertices for f in faces]

    def test_not_partite(self, triangle_boundary):
        with pytest.raises(NotPartite):
            faces_of_type(triangle_boundary, [0])


class TestConnectivity:
    """Total connectivity and the per-type-set sweep."""

    def test_single_facet_is_totally_connected(self, triangle):
        report = connectivity_report(triangle)
        assert report.totally_connected
        assert report.witness is None
        assert all(report.type_connected.values())

    def test_disjoint_facets_have_a_witness(self, two_edges):
        report = connectivity_report(two_edges)
        assert not report.totally_connected
        assert report.witness == []
        assert sorted(report.witness_components) == [["a", "b"], ["c", "d"]]
        assert report.type_connected == {}

    def test_hardcore_is_totally_connected(self, hardcore_small):
        assert connectivity_report(hardcore_small).totally_connected

    def test_sweep_cap(self, complete_tripartite):
        with pytest.raises(SizeCap, match="3 types exceed the sweep cap of 2"):
            connectivity_report(complete_tripartite, max_types=2)
        assert connectivity_report(complete_tripartite, max_types=3).totally_connected


class TestSweepGuards:
    """The type cap and memoized link incidences."""

    def test_check_sweep_size(self):
        check_sweep_size(17)
        check_sweep_size(3, max_types=3)
        with pytest.raises(SizeCap):
            check_sweep_size(18)

    def test_memoized_incidence_matches_and_is_frozen(self, hardcore_small):
        idx = hardcore_small.resolve(hardcore_small.facets[0][0][:1])
        fresh = hardcore_small.link_incidence(idx)
        first = hardcore_small.link_incidence(idx, memoize=True)
        again = hardcore_small.link_incidence(idx, memoize=True)
        assert hardcore_small.memoized_faces == 1
        for a, b, c in zip(fresh, first, again):
            assert np.array_equal(a, b)
            assert b is c
            assert not b.flags.writeable
        assert fresh[1].flags.writeable


class TestProduct:
    """Products on disjoint ground sets and type labels."""

    def _edge_factor(self, u, v, labels):
        return build_complex(
            [([f"{u}0", f"{v}0"], 1.0), ([f"{u}1", f"{v}0"], 3.0)],
            types={f"{u}0": labels[0], f"{u}1": labels[0], f"{v}0": labels[1]},
        )

    def test_weights_multiply(self):
        Y1 = self._edge_factor("a", "b", (0, 1))
        Y2 = self._edge_factor("c", "d", (2, 3))
        X = product(Y1, Y2)
        assert X.d == 3
        assert X.num_facets == 4
        weights = dict(X.facets)
        assert weights[("a1", "b0", "c1", "d0")] == pytest.approx(9 / 16)
        assert weights[("a0", "b0", "c0", "d0")] == pytest.approx(1 / 16)

    def test_shared_vertex_rejected(self):
        Y = self._edge_factor("a", "b", (0, 1))
        with pytest.raises(GroundSetOverlap):
            product(Y, Y)

    def test_shared_type_rejected(self):
        Y1 = self._edge_factor("a", "b", (0, 1))
        Y2 = self._edge_factor("c", "d", (1, 2))
        with pytest.raises(GroundSetOverlap):
            product(Y1, Y2)

    def test_relabel_types(self):
        Y = relabel_types(self._edge_factor("a", "b", (0, 1)), 5)
        assert Y.type_labels == (5, 6)
