"""Type-pair expansion analysis for partite complexes.

The epsilon table records, for every pair of types, the worst second
eigenvalue over the codimension-2 links that leave exactly that pair free.
Pairs above the zero tolerance are the edges of the dependency graph; its
components are the blocks along which the facet distribution factorizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, Field

from trickle_hdx.complex import WeightedComplex, check_sweep_size, faces_of_type
from trickle_hdx.config import DENSE_LIMIT, EIG_TOL, MAX_SWEEP_TYPES, ZERO_TOL
from trickle_hdx.decorators import op_logger
from trickle_hdx.errors import BadParams, Disconnected, NotPartite, WrongDimension
from trickle_hdx.log_system.unified_logger import UnifiedLogger
from trickle_hdx.spectra import face_lambda2

logger = UnifiedLogger.get_logger(__name__)

Pair = Tuple[int, int]


def pair(i: int, j: int) -> Pair:
    if i == j:
        raise BadParams(f"a type pair needs two distinct types, got {i} twice")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class EpsilonTable:
    """Worst link eigenvalue per unordered type pair.

    ``raw`` keeps the signed values; ``value`` clamps them below at zero.
    """

    types: Tuple[int, ...]
    raw: Dict[Pair, float]
    argmax: Dict[Pair, Tuple[str, ...]] = field(default_factory=dict)
    tolerance: float = EIG_TOL

    @classmethod
    def declared(
        cls, types: Iterable[int], values: Mapping[Pair, float]
    ) -> "EpsilonTable":
        """Table from given values; pairs not listed are 0."""
        labels = tuple(sorted(set(types)))
        raw = {p: 0.0 for p in itertools.combinations(labels, 2)}
        for (i, j), v in values.items():
            key = pair(i, j)
            if key not in raw:
                raise BadParams(f"pair {key} uses an unknown type")
            raw[key] = float(v)
        return cls(types=labels, raw=raw)

    @classmethod
    def uniform(
        cls, types: Iterable[int], edges: Iterable[Pair], value: float
    ) -> "EpsilonTable":
        """The same value on every listed pair, 0 elsewhere."""
        return cls.declared(types, {e: value for e in edges})

    def raw_value(self, i: int, j: int) -> float:
        return self.raw[pair(i, j)]

    def value(self, i: int, j: int) -> float:
        return max(self.raw[pair(i, j)], 0.0)

    @property
    def gamma2(self) -> float:
        return max((max(v, 0.0) for v in self.raw.values()), default=0.0)

    @property
    def num_types(self) -> int:
        return len(self.types)

    def restrict(self, keep: Iterable[int]) -> "EpsilonTable":
        labels = tuple(sorted(set(keep)))
        return EpsilonTable(
            types=labels,
            raw={p: v for p, v in self.raw.items() if set(p) <= set(labels)},
            argmax={p: f for p, f in self.argmax.items() if set(p) <= set(labels)},
            tolerance=self.tolerance,
        )


@dataclass(frozen=True, eq=False)
class DependencyGraph:
    """Graph on the types with an edge where some codim-2 link has lambda2 > tol."""

    graph: nx.Graph
    tolerance: float = ZERO_TOL

    @property
    def types(self) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.nodes))

    def degree(self, i: int) -> int:
        return int(self.graph.degree[i])

    @property
    def degrees(self) -> Dict[int, int]:
        return {i: self.degree(i) for i in self.types}

    @property
    def max_degree(self) -> int:
        return max(self.degrees.values(), default=0)

    def neighbors(self, i: int) -> List[int]:
        return sorted(self.graph.neighbors(i))

    def components(self) -> List[List[int]]:
        comps = [sorted(c) for c in nx.connected_components(self.graph)]
        return sorted(comps)

    def is_connected(self) -> bool:
        return self.graph.number_of_nodes() > 0 and nx.is_connected(self.graph)

    def subgraph(self, keep: Iterable[int]) -> "DependencyGraph":
        return DependencyGraph(
            graph=nx.Graph(self.graph.subgraph(list(keep))), tolerance=self.tolerance
        )

    def edges(self) -> List[Pair]:
        return sorted(pair(i, j) for i, j in self.graph.edges)


def dependency_graph(eps: EpsilonTable, tol: float = ZERO_TOL) -> DependencyGraph:
    """Dependency graph of an epsilon table; values at or below ``tol`` are no edge."""
    if tol < 0:
        raise BadParams(f"tolerance must be nonnegative, got {tol}")
    G = nx.Graph()
    G.add_nodes_from(eps.types)
    G.add_edges_from(p for p, v in sorted(eps.raw.items()) if v > tol)
    return DependencyGraph(graph=G, tolerance=tol)


@op_logger
def epsilon_table(
    X: WeightedComplex,
    workers: int = 1,
    dense_limit: int = DENSE_LIMIT,
    tol: float = EIG_TOL,
    max_types: int = MAX_SWEEP_TYPES,
    memoize: bool = False,
) -> EpsilonTable:
    """Worst lambda2 over the links of type ``[d] - {i, j}`` for every pair.

    Raises:
        NotPartite: ``X`` has no type partition
        Disconnected: some codim-2 link has a disconnected skeleton
        SizeCap: more than ``max_types`` types
    """
    if not X.is_partite:
        raise NotPartite("the epsilon table needs a partite complex")
    labels = X.type_labels
    if len(labels) < 2:
        raise BadParams("the epsilon table needs at least two types")
    check_sweep_size(len(labels), max_types)

    jobs = []
    owners: List[Pair] = []
    for i, j in itertools.combinations(labels, 2):
        rest = [t for t in labels if t not in (i, j)]
        for face in faces_of_type(X, rest):
            jobs.append(
                {
                    "X": X,
                    "face": face,
                    "dense_limit": dense_limit,
                    "tol": tol,
                    "memoize": memoize,
                }
            )
            owners.append((i, j))

    results = face_lambda2(jobs, workers=workers)

    raw: Dict[Pair, float] = {}
    argmax: Dict[Pair, Tuple[str, ...]] = {}
    for job, key, (value, components) in zip(jobs, owners, results):
        face = job["face"]
        if value is None:
            raise Disconnected(
                f"link of {face.as_list()} (types {list(key)} free) is disconnected",
                components=components,
                face=face.as_list(),
            )
        if key not in raw or value > raw[key]:
            raw[key] = value
            argmax[key] = face.vertices

    logger.debug(f"epsilon table over {len(raw)} pairs from {len(jobs)} links")
    return EpsilonTable(types=labels, raw=raw, argmax=argmax, tolerance=tol)


class EpsilonEntry(BaseModel):
    i: int
    j: int
    value: float
    raw: float
    argmax_face: List[str] = Field(default_factory=list)


class DeltaSummary(BaseModel):
    per_i: Dict[str, int]
    max: int


class EpsilonReport(BaseModel):
    eps: List[EpsilonEntry]
    Delta: DeltaSummary
    components: List[List[int]]
    gamma2: float
    zero_tolerance: float
    eig_tolerance: float


def epsilon_report(eps: EpsilonTable, G: DependencyGraph) -> EpsilonReport:
    return EpsilonReport(
        eps=[
            EpsilonEntry(
                i=i,
                j=j,
                value=max(v, 0.0),
                raw=v,
                argmax_face=list(eps.argmax.get((i, j), ())),
            )
            for (i, j), v in sorted(eps.raw.items())
        ],
        Delta=DeltaSummary(
            per_i={str(i): n for i, n in G.degrees.items()}, max=G.max_degree
        ),
        components=G.components(),
        gamma2=eps.gamma2,
        zero_tolerance=G.tolerance,
        eig_tolerance=eps.tolerance,
    )


class ProductDecomposition(BaseModel):
    """Factorization of the facet distribution along dependency components."""

    components: List[List[int]]
    residual: float
    choice_residual: float = 0.0
    choices_checked: int = 1
    is_product: bool
    tolerance: float


def _conditional(
    rows: np.ndarray,
    weights: np.ndarray,
    cols: Sequence[int],
    rest: Sequence[int],
    anchor: np.ndarray,
) -> Dict[Tuple[int, ...], float]:
    """Distribution of ``cols`` over the facets whose ``rest`` equals ``anchor``."""
    if len(rest):
        mask = np.all(rows[:, rest] == anchor, axis=1)
    else:
        mask = np.ones(len(rows), dtype=bool)
    total = math.fsum(weights[mask])
    out: Dict[Tuple[int, ...], float] = {}
    for row, w in zip(rows[mask][:, cols], weights[mask]):
        key = tuple(int(v) for v in row)
        out[key] = out.get(key, 0.0) + float(w) / total
    return out


@op_logger
def product_decomposition(
    X: WeightedComplex,
    tol: float = ZERO_TOL,
    strict: bool = False,
    factor_tol: float = 1e-10,
    eps: Optional[EpsilonTable] = None,
    workers: int = 1,
) -> ProductDecomposition:
    """Split ``X`` along the components of its dependency graph and verify.

    One facet supplies the anchor face of type ``[d] - I`` for each component
    ``I``; the facet weights must equal the product of the anchored link
    distributions. ``strict`` also checks that every anchor of every
    component yields the same link distribution.
    """
    if not X.is_partite:
        raise NotPartite("product decomposition needs a partite complex")
    if eps is None:
        eps = epsilon_table(X, workers=workers)
    G = dependency_graph(eps, tol)
    components = G.components()

    rows = X.typed_facets
    weights = X.weights
    col_of = {label: X.type_column(label) for label in X.type_labels}
    anchor_row = rows[0]

    factors: List[Tuple[List[int], Dict[Tuple[int, ...], float]]] = []
    choice_residual = 0.0
    checked = 1
    for comp in components:
        cols = [col_of[t] for t in comp]
        rest = [col_of[t] for t in X.type_labels if t not in comp]
        dist = _conditional(rows, weights, cols, rest, anchor_row[rest])
        factors.append((cols, dist))
        if strict and rest:
            anchors = np.unique(rows[:, rest], axis=0)
            checked = max(checked, len(anchors))
            for anchor in anchors:
                other = _conditional(rows, weights, cols, rest, anchor)
                keys = set(dist) | set(other)
                gap = max(abs(dist.get(k, 0.0) - other.get(k, 0.0)) for k in keys)
                choice_residual = max(choice_residual, gap)

    predicted = np.ones(len(rows))
    for cols, dist in factors:
        predicted *= np.array(
            [dist.get(tuple(int(v) for v in row[cols]), 0.0) for row in rows]
        )
    residual = max(
        float(np.max(np.abs(weights - predicted))),
        abs(1.0 - math.fsum(predicted)),
    )
    return ProductDecomposition(
        components=components,
        residual=residual,
        choice_residual=choice_residual,
        choices_checked=checked,
        is_product=residual <= factor_tol and choice_residual <= factor_tol,
        tolerance=factor_tol,
    )


class Rank2ProductCheck(BaseModel):
    is_product: bool
    sigma3_ratio: float
    factorization_residual: Optional[float] = None
    singular_values: List[float]
    tolerance: float


def rank2_product_check(X: WeightedComplex, tol: float = 1e-10) -> Rank2ProductCheck:
    """Decide whether a weighted bipartite graph is a product of its two sides.

    The adjacency matrix of a bipartite graph has the singular values of its
    weight block, each twice, so sigma_3/sigma_1 is the ratio of the block's
    second and first singular values.

    Raises:
        WrongDimension: ``X`` is not a 1-dimensional 2-partite complex
    """
    if X.d != 1 or not X.is_partite or len(X.type_labels) != 2:
        raise WrongDimension(
            "rank-2 product check needs a 1-dimensional 2-partite complex"
        )
    rows = X.typed_facets
    left = np.unique(rows[:, 0])
    right = np.unique(rows[:, 1])
    li = {int(v): n for n, v in enumerate(left)}
    ri = {int(v): n for n, v in enumerate(right)}
    block = np.zeros((len(left), len(right)))
    for (y, z), w in zip(rows, X.weights):
        block[li[int(y)], ri[int(z)]] += w

    s = np.linalg.svd(block, compute_uv=False)
    ratio = float(s[1] / s[0]) if len(s) > 1 else 0.0
    is_product = ratio <= tol
    residual: Optional[float] = None
    if is_product:
        y0, z0 = np.unravel_index(np.argmax(block), block.shape)
        given_z = block[:, z0] / block[:, z0].sum()
        given_y = block[y0, :] / block[y0, :].sum()
        residual = float(np.max(np.abs(block - np.outer(given_z, given_y))))
        is_product = residual <= tol
    return Rank2ProductCheck(
        is_product=is_product,
        sigma3_ratio=ratio,
        factorization_residual=residual,
        singular_values=[float(v) for v in np.repeat(s, 2)],
        tolerance=tol,
    )
