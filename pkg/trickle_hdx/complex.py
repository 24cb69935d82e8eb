"""Weighted pure simplicial complexes.

A complex is stored as an integer facet array over a sorted ground set plus a
normalized weight vector, so links, skeletons and face enumerations are numpy
masks over the facet rows rather than set manipulations. Faces are identified
by their sorted vertex tuple.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from pydantic import BaseModel, Field
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from trickle_hdx.config import MAX_SWEEP_TYPES
from trickle_hdx.errors import (
    CodimTooSmall,
    EmptyComplex,
    FaceNotInComplex,
    GroundSetOverlap,
    InvariantViolation,
    LevelOutOfRange,
    NonPure,
    NonpositiveWeight,
    NotPartite,
    PartiteViolation,
    SizeCap,
)

VertexTuple = Tuple[str, ...]
FaceLike = Union["Face", Iterable[Hashable]]
Incidence = Tuple[np.ndarray, np.ndarray, np.ndarray]

FACT_TOL = 1e-10


def type_key(types: Iterable[int]) -> str:
    """Canonical string key for a set of type labels, e.g. ``"0,2,3"``."""
    return ",".join(str(t) for t in sorted(types))


@dataclass(frozen=True)
class Face:
    """A face of a complex, canonicalized as a sorted vertex tuple."""

    vertices: VertexTuple
    dim: int
    codim: int
    type_set: Optional[FrozenSet[int]] = None

    def __iter__(self) -> Iterator[str]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def as_list(self) -> List[str]:
        return list(self.vertices)


@dataclass(frozen=True)
class FaceDistribution:
    """The induced distribution on faces of one dimension."""

    level: int
    weights: Dict[VertexTuple, float]

    def probability(self, face: FaceLike) -> float:
        key = face.vertices if isinstance(face, Face) else tuple(sorted(map(str, face)))
        return self.weights.get(key, 0.0)

    def total(self) -> float:
        return math.fsum(self.weights.values())


@dataclass(frozen=True, eq=False)
class WeightedComplex:
    """A pure weighted simplicial complex.

    ``facet_index`` has one row per facet holding sorted indices into
    ``vertices``; ``weights`` sums to one. ``vertex_types`` is present iff the
    complex is partite, and then every facet meets each label in
    ``type_labels`` exactly once.
    """

    d: int
    vertices: VertexTuple
    facet_index: np.ndarray
    weights: np.ndarray
    vertex_types: Optional[Tuple[int, ...]] = None
    type_labels: Tuple[int, ...] = ()
    _link_cache: Dict[Tuple[int, ...], "WeightedComplex"] = field(
        default_factory=dict, repr=False
    )
    _incidence_cache: Dict[Tuple[int, ...], Incidence] = field(
        default_factory=dict, repr=False
    )
    _cache_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __repr__(self) -> str:
        kind = "partite" if self.is_partite else "non-partite"
        return (
            f"WeightedComplex(d={self.d}, vertices={len(self.vertices)}, "
            f"facets={self.num_facets}, {kind})"
        )

    @property
    def is_partite(self) -> bool:
        return self.vertex_types is not None

    @property
    def num_facets(self) -> int:
        return int(self.facet_index.shape[0])

    @property
    def type_of(self) -> Optional[Dict[str, int]]:
        if self.vertex_types is None:
            return None
        return dict(zip(self.vertices, self.vertex_types))

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def membership(self) -> np.ndarray:
        """Boolean (facets x vertices) incidence matrix."""
        m, n = self.num_facets, len(self.vertices)
        incidence = np.zeros((m, n), dtype=bool)
        rows = np.repeat(np.arange(m), self.d + 1)
        incidence[rows, self.facet_index.ravel()] = True
        return incidence

    @cached_property
    def typed_facets(self) -> np.ndarray:
        """Facet array whose column ``t`` holds the vertex typed ``type_labels[t]``."""
        if self.vertex_types is None:
            raise NotPartite("typed facet columns need a partite complex")
        types = np.asarray(self.vertex_types)[self.facet_index]
        order = np.argsort(types, axis=1, kind="stable")
        return np.take_along_axis(self.facet_index, order, axis=1)

    @cached_property
    def vertex_marginals(self) -> np.ndarray:
        """Pr[x in facet] for every ground vertex."""
        return self.weights @ self.membership

    @property
    def facets(self) -> List[Tuple[VertexTuple, float]]:
        return [
            (tuple(self.vertices[j] for j in row), float(w))
            for row, w in zip(self.facet_index, self.weights)
        ]

    def type_column(self, label: int) -> int:
        return self.type_labels.index(label)

    def resolve(self, face: FaceLike) -> np.ndarray:
        """Vertex indices of a face, validated to lie in some facet."""
        names = face.vertices if isinstance(face, Face) else [str(v) for v in face]
        try:
            idx = np.array(sorted(self.index[v] for v in names), dtype=np.int64)
        except KeyError as e:
            raise FaceNotInComplex(
                f"vertex {e.args[0]!r} is not in the complex"
            ) from None
        if len(set(idx.tolist())) != len(idx):
            raise FaceNotInComplex(f"face {sorted(names)} repeats a vertex")
        if len(idx) and not self.membership[:, idx].all(axis=1).any():
            raise FaceNotInComplex(f"{sorted(names)} is not contained in any facet")
        return idx

    def make_face(self, idx: Sequence[int]) -> Face:
        idx = sorted(int(i) for i in idx)
        type_set = (
            frozenset(self.vertex_types[i] for i in idx)
            if self.vertex_types is not None
            else None
        )
        dim = len(idx) - 1
        return Face(
            vertices=tuple(self.vertices[i] for i in idx),
            dim=dim,
            codim=self.d - dim,
            type_set=type_set,
        )

    def face(self, face: FaceLike) -> Face:
        """Validate ``face`` against the complex and return its canonical form."""
        return self.make_face(self.resolve(face).tolist())

    def face_mask(self, idx: np.ndarray) -> np.ndarray:
        """Rows of the facets containing every vertex in ``idx``."""
        if len(idx) == 0:
            return np.ones(self.num_facets, dtype=bool)
        return self.membership[:, idx].all(axis=1)

    def link_incidence(self, idx: np.ndarray, memoize: bool = False) -> Incidence:
        """Incidence data of the link of the face with vertex indices ``idx``.

        Returns the link's vertex indices, the (link facets x link vertices)
        boolean incidence and the unnormalized facet weights. With ``memoize``
        the result is kept per face and handed back read-only.
        """
        key = tuple(idx.tolist())
        if memoize:
            with self._cache_lock:
                hit = self._incidence_cache.get(key)
            if hit is not None:
                return hit
        mask = self.face_mask(idx)
        rows = self.membership[mask]
        if len(idx):
            rows[:, idx] = False
        cols = np.flatnonzero(rows.any(axis=0))
        result = (cols, rows[:, cols], self.weights[mask])
        if memoize:
            for arr in result:
                arr.flags.writeable = False
            with self._cache_lock:
                self._incidence_cache[key] = result
        return result

    @property
    def memoized_faces(self) -> int:
        """Number of faces whose link data is currently memoized."""
        with self._cache_lock:
            return len(self._incidence_cache) + len(self._link_cache)

    def faces(self, dim: int) -> List[Face]:
        """All faces of dimension ``dim`` (``-1`` gives the empty face)."""
        if dim < -1 or dim > self.d:
            raise LevelOutOfRange(f"dimension {dim} outside [-1, {self.d}]")
        if dim == -1:
            return [self.make_face(())]
        blocks = [
            self.facet_index[:, list(cols)]
            for cols in itertools.combinations(range(self.d + 1), dim + 1)
        ]
        rows = np.unique(np.concatenate(blocks, axis=0), axis=0)
        return [self.make_face(row) for row in rows]

    def faces_of_codim(self, k: int) -> List[Face]:
        return self.faces(self.d - k)

    def cached_link(self, idx: np.ndarray) -> Optional["WeightedComplex"]:
        with self._cache_lock:
            return self._link_cache.get(tuple(idx.tolist()))

    def store_link(self, idx: np.ndarray, value: "WeightedComplex") -> None:
        with self._cache_lock:
            self._link_cache[tuple(idx.tolist())] = value


def _from_rows(
    d: int,
    vertices: Sequence[str],
    rows: np.ndarray,
    weights: np.ndarray,
    vertex_types: Optional[Sequence[int]],
) -> WeightedComplex:
    """Assemble a complex from already validated rows over ``vertices``.

    Drops unused vertices, sorts each row, merges duplicate facets and
    normalizes the weights.
    """
    used = np.unique(rows)
    remap = np.full(len(vertices), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    rows = np.sort(remap[rows], axis=1)
    rows, inverse = np.unique(rows, axis=0, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights, minlength=len(rows))
    merged = merged / math.fsum(merged)
    new_vertices = tuple(vertices[i] for i in used)
    new_types = (
        tuple(int(vertex_types[i]) for i in used) if vertex_types is not None else None
    )
    labels = tuple(sorted(set(new_types))) if new_types is not None else ()
    return WeightedComplex(
        d=d,
        vertices=new_vertices,
        facet_index=rows.astype(np.int64),
        weights=merged,
        vertex_types=new_types,
        type_labels=labels,
    )


def build_complex(
    facets: Iterable[Tuple[Iterable[Hashable], float]],
    types: Optional[Mapping[Hashable, int]] = None,
    d: Optional[int] = None,
) -> WeightedComplex:
    """Validate facets and weights and build a complex.

    Vertex identifiers are converted to strings. Repeated facets have their
    weights added. Weights may be unnormalized.

    Raises:
        EmptyComplex: no facets
        NonPure: facet sizes differ (or differ from ``d + 1``)
        NonpositiveWeight: a weight is not a positive finite number
        PartiteViolation: ``types`` given and a facet misses or repeats a type
    """
    vertex_sets: List[VertexTuple] = []
    weight_list: List[float] = []
    for verts, w in facets:
        names = [str(v) for v in verts]
        vs = tuple(sorted(set(names)))
        if len(vs) != len(names):
            raise NonPure(f"facet {sorted(names)} repeats a vertex")
        w = float(w)
        if not (w > 0 and math.isfinite(w)):
            raise NonpositiveWeight(f"facet {list(vs)} has weight {w}")
        vertex_sets.append(vs)
        weight_list.append(w)

    if not vertex_sets:
        raise EmptyComplex("a complex needs at least one facet")

    sizes = {len(vs) for vs in vertex_sets}
    if len(sizes) != 1:
        raise NonPure(f"facet sizes differ: {sorted(sizes)}")
    size = sizes.pop()
    if size == 0:
        raise NonPure("facets must be nonempty")
    if d is not None and d + 1 != size:
        raise NonPure(f"declared dimension {d} but facets have {size} vertices")
    dim = size - 1

    ground = sorted({v for vs in vertex_sets for v in vs})
    index = {v: i for i, v in enumerate(ground)}
    rows = np.array([[index[v] for v in vs] for vs in vertex_sets], dtype=np.int64)

    vertex_types: Optional[List[int]] = None
    if types is not None:
        type_map = {str(k): int(v) for k, v in types.items()}
        missing = [v for v in ground if v not in type_map]
        if missing:
            raise PartiteViolation(f"vertices without a type: {missing[:5]}")
        vertex_types = [type_map[v] for v in ground]
        labels = set(vertex_types)
        if len(labels) != dim + 1:
            raise PartiteViolation(
                f"{len(labels)} type labels used but facets have {dim + 1} vertices"
            )
        for vs in vertex_sets:
            seen = [type_map[v] for v in vs]
            if len(set(seen)) != len(seen):
                raise PartiteViolation(f"facet {list(vs)} repeats a type")

    return _from_rows(dim, ground, rows, np.array(weight_list), vertex_types)


def link(X: WeightedComplex, tau: FaceLike, memoize: bool = False) -> WeightedComplex:
    """The link of ``tau`` with its conditional facet distribution.

    Raises:
        FaceNotInComplex: ``tau`` is not a face of ``X``
        CodimTooSmall: ``tau`` is a facet
    """
    idx = X.resolve(tau)
    codim = X.d + 1 - len(idx)
    if codim < 1:
        raise CodimTooSmall(f"the link of a facet is empty (codim {codim})")
    if memoize:
        cached = X.cached_link(idx)
        if cached is not None:
            return cached

    mask = X.face_mask(idx)
    sub = X.facet_index[mask]
    keep = ~np.isin(sub, idx)
    rows = sub[keep].reshape(sub.shape[0], codim)
    result = _from_rows(codim - 1, X.vertices, rows, X.weights[mask], X.vertex_types)
    if memoize:
        X.store_link(idx, result)
    return result


def induced_distribution(X: WeightedComplex, i: int) -> FaceDistribution:
    """The distribution on ``X(i)``: Pr[sigma in facet] / C(d+1, i+1).

    Raises:
        LevelOutOfRange: ``i`` outside ``[0, d]``
    """
    if i < 0 or i > X.d:
        raise LevelOutOfRange(f"level {i} outside [0, {X.d}]")
    combos = list(itertools.combinations(range(X.d + 1), i + 1))
    blocks = np.concatenate([X.facet_index[:, list(c)] for c in combos], axis=0)
    block_weights = np.tile(X.weights, len(combos))
    rows, inverse = np.unique(blocks, axis=0, return_inverse=True)
    mass = np.bincount(inverse.ravel(), weights=block_weights) / len(combos)
    dist = FaceDistribution(
        level=i,
        weights={
            tuple(X.vertices[j] for j in row): float(p) for row, p in zip(rows, mass)
        },
    )
    if i == 0 and X.is_partite:
        _check_partite_normalization(X, dist)
    return dist


def _check_partite_normalization(X: WeightedComplex, dist: FaceDistribution) -> None:
    marginals = X.vertex_marginals
    k = X.d + 1
    assert X.vertex_types is not None
    types = np.asarray(X.vertex_types)
    for label in X.type_labels:
        total = math.fsum(marginals[types == label])
        if abs(total - 1.0) > FACT_TOL:
            raise InvariantViolation(f"type {label} marginals sum to {total}")
    for j, v in enumerate(X.vertices):
        if abs(k * dist.weights[(v,)] - marginals[j]) > FACT_TOL:
            raise InvariantViolation(f"vertex {v}: k * pi_0 != Pr[x in facet]")


def faces_of_type(X: WeightedComplex, S: Iterable[int]) -> List[Face]:
    """Distinct projections of the facets onto the type labels ``S``.

    Raises:
        NotPartite: ``X`` has no type partition
    """
    if not X.is_partite:
        raise NotPartite("faces_of_type needs a partite complex")
    labels = sorted(set(int(s) for s in S))
    unknown = [s for s in labels if s not in X.type_labels]
    if unknown:
        raise NotPartite(f"type labels {unknown} are not used by the complex")
    if not labels:
        return [X.make_face(())]
    cols = [X.type_column(s) for s in labels]
    rows = np.unique(X.typed_facets[:, cols], axis=0)
    faces = [X.make_face(row) for row in rows]
    return sorted(faces, key=lambda f: f.vertices)


def _connected(adjacency: np.ndarray) -> Tuple[bool, List[np.ndarray]]:
    n = adjacency.shape[0]
    if n <= 1:
        return True, [np.arange(n)]
    count, labels = connected_components(csr_matrix(adjacency), directed=False)
    return count == 1, [np.flatnonzero(labels == c) for c in range(count)]


def check_sweep_size(num_types: int, max_types: int = MAX_SWEEP_TYPES) -> None:
    """Refuse a full sweep over more than ``max_types`` types.

    Raises:
        SizeCap: ``num_types`` exceeds ``max_types``
    """
    if num_types > max_types:
        raise SizeCap(f"{num_types} types exceed the sweep cap of {max_types}")


class ConnectivityReport(BaseModel):
    """Outcome of the total-connectivity sweep."""

    totally_connected: bool
    witness: Optional[List[str]] = None
    witness_components: List[List[str]] = Field(default_factory=list)
    faces_checked: int = 0
    type_connected: Dict[str, bool] = Field(default_factory=dict)


def connectivity_report(
    X: WeightedComplex, max_types: int = MAX_SWEEP_TYPES
) -> ConnectivityReport:
    """Check every link of codim >= 2 for a connected 1-skeleton.

    Stops at the first disconnected link, which becomes the witness. For
    partite complexes also reports, for every type subset of size >= 2,
    whether the ground 1-skeleton restricted to those types is connected.
    """
    check_sweep_size(X.d + 1, max_types)
    witness: Optional[List[str]] = None
    witness_components: List[List[str]] = []
    checked = 0
    for k in range(2, X.d + 2):
        for face in X.faces_of_codim(k):
            idx = X.resolve(face)
            cols, incidence, _ = X.link_incidence(idx)
            co = incidence.T.astype(np.int64) @ incidence.astype(np.int64)
            np.fill_diagonal(co, 0)
            ok, comps = _connected(co > 0)
            checked += 1
            if not ok:
                witness = face.as_list()
                witness_components = [
                    [X.vertices[cols[j]] for j in comp] for comp in comps
                ]
                break
        if witness is not None:
            break

    type_connected: Dict[str, bool] = {}
    if X.is_partite:
        member = X.membership.astype(np.int64)
        ground = member.T @ member
        np.fill_diagonal(ground, 0)
        types = np.asarray(X.vertex_types)
        for size in range(2, len(X.type_labels) + 1):
            for S in itertools.combinations(X.type_labels, size):
                sel = np.flatnonzero(np.isin(types, S))
                ok, _ = _connected(ground[np.ix_(sel, sel)] > 0)
                type_connected[type_key(S)] = ok

    return ConnectivityReport(
        totally_connected=witness is None,
        witness=witness,
        witness_components=witness_components,
        faces_checked=checked,
        type_connected=type_connected,
    )


def relabel_types(X: WeightedComplex, offset: int) -> WeightedComplex:
    """Shift every type label by ``offset``."""
    if X.vertex_types is None:
        raise NotPartite("only partite complexes carry type labels")
    shifted = tuple(t + offset for t in X.vertex_types)
    return WeightedComplex(
        d=X.d,
        vertices=X.vertices,
        facet_index=X.facet_index,
        weights=X.weights,
        vertex_types=shifted,
        type_labels=tuple(sorted(set(shifted))),
    )


def product(*factors: WeightedComplex) -> WeightedComplex:
    """Product of complexes on disjoint ground sets.

    Facets are unions of one facet per factor, weighted by the product of the
    factor weights. Partite factors must use disjoint type labels.

    Raises:
        GroundSetOverlap: shared vertices or shared type labels
        PartiteViolation: partite and non-partite factors mixed
    """
    if not factors:
        raise EmptyComplex("product of no factors")
    seen: Dict[str, int] = {}
    for n, X in enumerate(factors):
        for v in X.vertices:
            if v in seen:
                raise GroundSetOverlap(f"vertex {v!r} is in factors {seen[v]} and {n}")
            seen[v] = n

    partite = [X.is_partite for X in factors]
    if any(partite) and not all(partite):
        raise PartiteViolation("cannot mix partite and non-partite factors")
    types: Optional[Dict[str, int]] = None
    if all(partite):
        types = {}
        used: Dict[int, int] = {}
        for n, X in enumerate(factors):
            for label in X.type_labels:
                if label in used:
                    raise GroundSetOverlap(
                        f"type {label} is used by factors {used[label]} and {n}"
                    )
                used[label] = n
            assert X.type_of is not None
            types.update(X.type_of)

    combined = []
    for parts in itertools.product(*(X.facets for X in factors)):
        verts = [v for vs, _ in parts for v in vs]
        combined.append((verts, math.prod(w for _, w in parts)))
    return build_complex(combined, types=types)
