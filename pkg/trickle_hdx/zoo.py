"""Generators for concrete complexes.

Every generator returns a validated ``WeightedComplex``; random families are
deterministic given their seed. ``generate`` dispatches a ``GeneratorSpec``,
which is also what the CLI's ``generate`` command builds from its flags.
"""

from __future__ import annotations

import itertools
import math
from typing import (
    Any,
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    Literal,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np
from pydantic import BaseModel, Field

from trickle_hdx.complex import (
    WeightedComplex,
    build_complex,
    connectivity_report,
    relabel_types,
)
from trickle_hdx.complex import product as complex_product
from trickle_hdx.config import ENUMERATION_BUDGET
from trickle_hdx.errors import (
    BadParams,
    ConnectivityUnreachable,
    InvariantViolation,
    NoProperColoring,
    PartiteViolation,
    SizeCap,
)
from trickle_hdx.log_system.unified_logger import UnifiedLogger

logger = UnifiedLogger.get_logger(__name__)

Family = Literal[
    "coloring", "hardcore", "barbell", "product", "complete_partite", "random_partite"
]


class GeneratorSpec(BaseModel):
    """A generator family with its parameters."""

    family: Family
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None


def connected_subsets(graph: nx.Graph, size: int) -> List[Tuple[Hashable, ...]]:
    """All vertex sets of ``size`` inducing a connected subgraph.

    Enumerated with the ESU scheme: each set is grown from its smallest
    vertex through exclusive neighbours only, so it is produced exactly once.
    """
    if size < 1:
        raise BadParams(f"subset size must be positive, got {size}")
    nodes = sorted(graph.nodes)
    order = {v: n for n, v in enumerate(nodes)}
    adj = {v: set(graph.neighbors(v)) for v in nodes}
    found: List[Tuple[Hashable, ...]] = []

    def extend(
        sub: List[Hashable], ext: List[Hashable], root: Hashable, closed: set
    ) -> None:
        if len(sub) == size:
            found.append(tuple(sorted(sub, key=order.__getitem__)))
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            exclusive = [
                u for u in adj[w] if order[u] > order[root] and u not in closed
            ]
            extend(sub + [w], ext + exclusive, root, closed | adj[w] | {w})

    for v in nodes:
        extend([v], [u for u in adj[v] if order[u] > order[v]], v, adj[v] | {v})
    return sorted(found, key=lambda s: [order[v] for v in s])


def coloring_complex(
    graph: nx.Graph,
    lists: Mapping[Hashable, Iterable[Hashable]],
    budget: int = ENUMERATION_BUDGET,
) -> WeightedComplex:
    """Partite complex of proper list colorings, uniformly weighted.

    Part ``t`` is the ``t``-th graph vertex in sorted order; its elements are
    the pairs ``"vertex:color"``.

    Raises:
        BadParams: a vertex has no list or an empty one
        NoProperColoring: no proper coloring exists
        SizeCap: more than ``budget`` proper colorings
    """
    nodes = sorted(graph.nodes)
    if not nodes:
        raise BadParams("the graph has no vertices")
    palette: Dict[Hashable, List[Hashable]] = {}
    for v in nodes:
        colors = sorted(set(lists.get(v, ())), key=str)
        if not colors:
            raise BadParams(f"vertex {v!r} has an empty color list")
        palette[v] = colors
    position = {v: n for n, v in enumerate(nodes)}
    earlier = {
        v: [u for u in graph.neighbors(v) if position[u] < position[v]] for v in nodes
    }

    colorings: List[Dict[Hashable, Hashable]] = []
    assignment: Dict[Hashable, Hashable] = {}

    def assign(n: int) -> None:
        if n == len(nodes):
            if len(colorings) >= budget:
                raise SizeCap(f"more than {budget} proper colorings")
            colorings.append(dict(assignment))
            return
        v = nodes[n]
        for c in palette[v]:
            if all(assignment[u] != c for u in earlier[v]):
                assignment[v] = c
                assign(n + 1)
                del assignment[v]

    assign(0)
    if not colorings:
        raise NoProperColoring("the lists admit no proper coloring")

    types = {f"{v}:{c}": t for t, v in enumerate(nodes) for c in palette[v]}
    facets = [([f"{v}:{col[v]}" for v in nodes], 1.0) for col in colorings]
    logger.debug(f"coloring complex with {len(facets)} facets")
    return build_complex(facets, types=types)


def hardcore_complex(d: int, lam: float) -> WeightedComplex:
    """Independent sets of K_{d,d} as a 2d-partite complex.

    Part ``i - 1`` is ``{"i_in", "i_out"}`` for i = 1..2d; vertices 1..d form
    one side of K_{d,d}. A facet picks in/out per part with the in-set
    independent, weighted ``lam ** (number of in-elements)``.
    """
    if d < 2:
        raise BadParams(f"hardcore complex needs d >= 2, got {d}")
    if not (lam > 0 and math.isfinite(lam)):
        raise BadParams(f"activity must be positive, got {lam}")
    parts = range(1, 2 * d + 1)
    types = {f"{i}_{s}": i - 1 for i in parts for s in ("in", "out")}
    in_sets = set()
    for side in (range(1, d + 1), range(d + 1, 2 * d + 1)):
        for r in range(d + 1):
            in_sets.update(frozenset(c) for c in itertools.combinations(side, r))
    facets = [
        ([f"{i}_in" if i in chosen else f"{i}_out" for i in parts], lam ** len(chosen))
        for chosen in sorted(in_sets, key=lambda s: (len(s), sorted(s)))
    ]
    return build_complex(facets, types=types)


def barbell_graph(d: int) -> nx.Graph:
    """Two 2d-cliques joined through a path of d extra vertices."""
    return nx.barbell_graph(2 * d, d)


def barbell_complex(d: int, budget: int = ENUMERATION_BUDGET) -> WeightedComplex:
    """Connected d-subsets of the barbell graph, unit weights.

    Raises:
        BadParams: d < 3
        SizeCap: C(5d, d) exceeds ``budget``
    """
    if d < 3:
        raise BadParams(f"barbell complex needs d >= 3, got {d}")
    candidates = math.comb(5 * d, d)
    if candidates > budget:
        raise SizeCap(
            f"C({5 * d}, {d}) = {candidates} candidate subsets exceed {budget}"
        )
    graph = barbell_graph(d)
    subsets = connected_subsets(graph, d)
    for s in subsets:
        if not nx.is_connected(graph.subgraph(s)):
            raise InvariantViolation(f"subset {list(s)} is not connected")
    return build_complex([([str(v) for v in s], 1.0) for s in subsets])


def complete_partite_complex(part_sizes: Sequence[int]) -> WeightedComplex:
    """Every transversal of the parts is a facet, uniformly weighted."""
    if not part_sizes:
        raise BadParams("at least one part is needed")
    if any(int(s) < 1 for s in part_sizes):
        raise BadParams(f"part sizes must be positive, got {list(part_sizes)}")
    names = [[f"{t}.{v}" for v in range(int(s))] for t, s in enumerate(part_sizes)]
    types = {name: t for t, part in enumerate(names) for name in part}
    facets = ((list(f), 1.0) for f in itertools.product(*names))
    return build_complex(facets, types=types)


def random_partite_complex(
    d: int,
    part_size: Union[int, Sequence[int]] = 2,
    density: float = 1.0,
    coupling_prob: float = 0.5,
    strength: float = 0.1,
    field: float = 0.5,
    seed: Optional[int] = None,
    max_retries: int = 20,
    budget: int = ENUMERATION_BUDGET,
) -> WeightedComplex:
    """Random (d+1)-partite complex from a pairwise Markov random field.

    Facet weights are ``exp(field * sum_i h_i(x_i) + strength * sum J_ij(x_i, x_j))``
    over a random set of coupled type pairs, so uncoupled pairs are
    conditionally independent. Each transversal is kept with probability
    ``density``; draws are repeated until the complex is totally connected.

    Raises:
        ConnectivityUnreachable: no totally connected draw within ``max_retries``
    """
    if d < 1:
        raise BadParams(f"dimension must be positive, got {d}")
    sizes = [part_size] * (d + 1) if isinstance(part_size, int) else list(part_size)
    if len(sizes) != d + 1 or any(s < 1 for s in sizes):
        raise BadParams(f"need {d + 1} positive part sizes, got {sizes}")
    if not (0.0 < density <= 1.0):
        raise BadParams(f"density must lie in (0, 1], got {density}")
    if math.prod(sizes) > budget:
        raise SizeCap(f"{math.prod(sizes)} transversals exceed {budget}")

    rng = np.random.default_rng(seed)
    rows = np.array(list(itertools.product(*(range(s) for s in sizes))), dtype=np.int64)
    names = [[f"{t}.{v}" for v in range(s)] for t, s in enumerate(sizes)]
    types = {name: t for t, part in enumerate(names) for name in part}

    for attempt in range(max_retries):
        log_w = np.zeros(len(rows))
        for t, s in enumerate(sizes):
            log_w += field * rng.normal(size=s)[rows[:, t]]
        for i, j in itertools.combinations(range(d + 1), 2):
            if rng.random() < coupling_prob:
                J = rng.normal(size=(sizes[i], sizes[j]))
                log_w += strength * J[rows[:, i], rows[:, j]]
        keep = rng.random(len(rows)) < density
        if not keep.any():
            continue
        facets = [
            ([names[t][v] for t, v in enumerate(row)], float(w))
            for row, w in zip(rows[keep], np.exp(log_w[keep]))
        ]
        try:
            X = build_complex(facets, types=types)
        except PartiteViolation as e:
            logger.debug(f"attempt {attempt}: {e}")
            continue
        if connectivity_report(X).totally_connected:
            return X
        logger.debug(f"attempt {attempt}: not totally connected")
    raise ConnectivityUnreachable(
        f"no totally connected complex after {max_retries} draws (seed {seed})"
    )


def _renamed(X: WeightedComplex, prefix: str) -> WeightedComplex:
    return WeightedComplex(
        d=X.d,
        vertices=tuple(f"{prefix}{v}" for v in X.vertices),
        facet_index=X.facet_index,
        weights=X.weights,
        vertex_types=X.vertex_types,
        type_labels=X.type_labels,
    )


def product_complex(factors: Sequence[WeightedComplex]) -> WeightedComplex:
    """Product of complexes after moving each onto its own vertices and types.

    Factor ``n`` gets vertex prefix ``"f<n>/"``; partite factors have their
    type labels shifted past those of the earlier factors.
    """
    if not factors:
        raise BadParams("a product needs at least one factor")
    moved = []
    offset = 0
    for n, X in enumerate(factors):
        if X.is_partite:
            X = relabel_types(X, offset - min(X.type_labels))
            offset = max(X.type_labels) + 1
        moved.append(_renamed(X, f"f{n}/"))
    return complex_product(*moved)


def _param(params: Mapping[str, Any], name: str, cast: Callable[[Any], Any]) -> Any:
    if name not in params:
        raise BadParams(f"missing generator parameter {name!r}")
    try:
        return cast(params[name])
    except (TypeError, ValueError) as e:
        raise BadParams(f"bad value for {name!r}: {e}") from None


def _coloring_from_params(params: Mapping[str, Any], budget: int) -> WeightedComplex:
    graph = nx.Graph()
    graph.add_nodes_from(range(_param(params, "n", int)))
    for edge in params.get("edges", []):
        u, v = (int(x) for x in edge)
        graph.add_edge(u, v)
    if "lists" in params:
        lists = {int(k): list(v) for k, v in params["lists"].items()}
    else:
        q = _param(params, "colors", int)
        lists = {v: list(range(q)) for v in graph.nodes}
    return coloring_complex(graph, lists, budget=budget)


def generate(spec: GeneratorSpec, budget: int = ENUMERATION_BUDGET) -> WeightedComplex:
    """Build the complex described by ``spec``."""
    p = spec.params
    if spec.family == "coloring":
        return _coloring_from_params(p, budget)
    if spec.family == "hardcore":
        return hardcore_complex(_param(p, "d", int), _param(p, "lambda", float))
    if spec.family == "barbell":
        return barbell_complex(_param(p, "d", int), budget=budget)
    if spec.family == "complete_partite":
        return complete_partite_complex(_param(p, "part_sizes", list))
    if spec.family == "random_partite":
        options = {
            k: p[k]
            for k in (
                "part_size",
                "density",
                "coupling_prob",
                "strength",
                "field",
                "max_retries",
            )
            if k in p
        }
        return random_partite_complex(
            _param(p, "d", int), seed=spec.seed, budget=budget, **options
        )
    factors = [
        generate(GeneratorSpec.model_validate(f), budget=budget)
        for f in _param(p, "factors", list)
    ]
    return product_complex(factors)
