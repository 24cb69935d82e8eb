"""Certificate vectors f_S built from the epsilon table.

For a type set ``S`` leaving ``k >= 2`` free types, ``f_S`` assigns a value to
every free type. With ``G_S`` the dependency graph on the free types:

- if ``G_S`` is disconnected, ``f_S`` is the sum of ``f_{[d]-I}`` over its
  components ``I`` with at least two types;
- otherwise ``f_S(i)`` is ``eps_ij * g_ij(Delta_S(j))`` when ``i`` has the single
  neighbour ``j`` and ``sum_j eps_ij * h_i(Delta_S(i))`` when it has more.

``g_ij(1) = 1``, ``g_ij(l) = 1 + 1.3 eps_ij H_{l-1}``,
``h_i(1) = max_j g_ij(Delta)`` and
``h_i(l) = h_i(1) / (1 - c * sum_{j<=l} eps_j H_{l-1}(j-1))`` with ``c = 1 + delta/2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import BaseModel, Field

from trickle_hdx.complex import check_sweep_size
from trickle_hdx.config import MAX_SWEEP_TYPES
from trickle_hdx.decorators import op_logger
from trickle_hdx.errors import BadParams, DeltaOutOfRange, DenominatorNonpositive
from trickle_hdx.partite import DependencyGraph, EpsilonTable
from trickle_hdx.trickledown.conditions import Ordering, ordered_weights
from trickle_hdx.trickledown.harmonic import harmonic, harmonic_tail

C13 = 1.3
C_PRIME = 0.5

TypeSet = FrozenSet[int]


@dataclass(frozen=True)
class FVectors:
    """The certificate family with its g and h tables."""

    types: Tuple[int, ...]
    delta: float
    ordering: Ordering
    Delta: int
    f: Dict[TypeSet, Dict[int, float]]
    g: Dict[Tuple[int, int, int], float] = field(default_factory=dict)
    h: Dict[Tuple[int, int], float] = field(default_factory=dict)
    c13: float = C13
    c_prime: float = C_PRIME
    graph: Optional[DependencyGraph] = None

    @property
    def c(self) -> float:
        return 1.0 + self.c_prime * self.delta

    def value(self, S: Iterable[int], i: int) -> float:
        return self.f[frozenset(S)].get(i, 0.0)

    def vector(self, S: Iterable[int]) -> Dict[int, float]:
        return self.f[frozenset(S)]

    def max_value(self, S: Iterable[int]) -> float:
        return max(self.f[frozenset(S)].values(), default=0.0)

    def free_types(self, S: Iterable[int]) -> List[int]:
        S = set(S)
        return [t for t in self.types if t not in S]

    def type_sets(self) -> List[TypeSet]:
        """Every S in the family, largest first."""
        return sorted(self.f, key=lambda S: (-len(S), sorted(S)))

    def with_value(self, S: Iterable[int], i: int, value: float) -> "FVectors":
        """Copy with a single entry overwritten."""
        key = frozenset(S)
        f = {s: dict(v) for s, v in self.f.items()}
        f[key][i] = value
        return replace(self, f=f)


def _type_sets(types: Tuple[int, ...]) -> List[TypeSet]:
    out = []
    for size in range(len(types) - 2, -1, -1):
        out.extend(frozenset(S) for S in itertools.combinations(types, size))
    return out


@op_logger
def build_f_vectors(
    eps: EpsilonTable,
    G: DependencyGraph,
    delta: float,
    ordering: Ordering = Ordering.DECREASING,
    c13: float = C13,
    c_prime: float = C_PRIME,
    max_types: int = MAX_SWEEP_TYPES,
) -> FVectors:
    """Build f_S for every S leaving at least two free types.

    Raises:
        DeltaOutOfRange: delta not in (0, 1)
        DenominatorNonpositive: some h_i(l) denominator is <= 0, which means the
            second condition fails at this delta
        SizeCap: more than ``max_types`` types
    """
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")
    types = eps.types
    if len(types) < 2:
        raise BadParams("certificates need at least two types")
    check_sweep_size(len(types), max_types)
    ordering = Ordering(ordering)
    Delta = G.max_degree
    c = 1.0 + c_prime * delta

    g: Dict[Tuple[int, int, int], float] = {}
    for i in types:
        for j in G.neighbors(i):
            e = eps.value(i, j)
            g[(i, j, 1)] = 1.0
            for level in range(2, Delta + 1):
                g[(i, j, level)] = 1.0 + c13 * e * harmonic(level - 1)

    h: Dict[Tuple[int, int], float] = {}
    for i in types:
        nbrs = G.neighbors(i)
        if not nbrs:
            continue
        h1 = max(g[(i, j, Delta)] for j in nbrs)
        h[(i, 1)] = h1
        weights = ordered_weights((eps.value(i, j) for j in nbrs), ordering)
        for level in range(2, len(nbrs) + 1):
            load = math.fsum(
                weights[j] * harmonic_tail(level - 1, j) for j in range(level)
            )
            denominator = 1.0 - c * load
            if denominator <= 0:
                raise DenominatorNonpositive(i, level, denominator)
            h[(i, level)] = h1 / denominator

    f: Dict[TypeSet, Dict[int, float]] = {}
    for S in _type_sets(types):
        free = [t for t in types if t not in S]
        GS = G.subgraph(free)
        vec = {t: 0.0 for t in free}
        comps = GS.components()
        if len(comps) > 1:
            for comp in comps:
                if len(comp) < 2:
                    continue
                inner = f[frozenset(t for t in types if t not in comp)]
                for t in comp:
                    vec[t] += inner[t]
        else:
            for i in free:
                nbrs = GS.neighbors(i)
                if len(nbrs) == 1:
                    j = nbrs[0]
                    vec[i] = eps.value(i, j) * g[(i, j, GS.degree(j))]
                elif len(nbrs) >= 2:
                    total = math.fsum(eps.value(i, j) for j in nbrs)
                    vec[i] = total * h[(i, len(nbrs))]
        f[S] = vec

    return FVectors(
        types=types,
        delta=delta,
        ordering=ordering,
        Delta=Delta,
        f=f,
        g=g,
        h=h,
        c13=c13,
        c_prime=c_prime,
        graph=G,
    )


class FEntry(BaseModel):
    S: List[int]
    k: int
    values: Dict[str, float]


class FVectorsReport(BaseModel):
    types: List[int]
    delta: float
    ordering: Ordering
    Delta: int
    c: float
    c13: float
    c_prime: float
    f: List[FEntry]
    g: Dict[str, float]
    h: Dict[str, float]


def f_vectors_report(fv: FVectors) -> FVectorsReport:
    return FVectorsReport(
        types=list(fv.types),
        delta=fv.delta,
        ordering=fv.ordering,
        Delta=fv.Delta,
        c=fv.c,
        c13=fv.c13,
        c_prime=fv.c_prime,
        f=[
            FEntry(
                S=sorted(S),
                k=len(fv.types) - len(S),
                values={str(i): v for i, v in sorted(fv.f[S].items())},
            )
            for S in fv.type_sets()
        ],
        g={f"{i},{j},{l}": v for (i, j, l), v in sorted(fv.g.items())},
        h={f"{i},{l}": v for (i, l), v in sorted(fv.h.items())},
    )


class InequalityMargin(BaseModel):
    part: int
    neighbor: Optional[int] = None
    t: int
    margin: float


class InequalityDiagnostics(BaseModel):
    """Margins of the two internal inequalities and the neighbour-sum bound."""

    g_increments: List[InequalityMargin] = Field(default_factory=list)
    h_increments: List[InequalityMargin] = Field(default_factory=list)
    neighbor_sums: Dict[str, float] = Field(default_factory=dict)
    worst_g: float = 0.0
    worst_h: float = 0.0
    worst_neighbor_sum: float = 0.0
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return min(self.worst_g, self.worst_h) >= -self.tolerance


def inequality_diagnostics(
    fv: FVectors, eps: EpsilonTable, G: DependencyGraph, tol: float = 1e-10
) -> InequalityDiagnostics:
    """Check the increment inequalities the recursion relies on.

    - ``(t-1) eps_ij (g_ij(t) - g_ij(t-1)) >= eps_ij^2 g_ij(t)^2`` for t in 2..Delta
    - ``(t-1)(h_i(t) - h_i(t-1)) >= alpha h_i(t)^2`` for t in 2..Delta(i), where
      alpha is the sum of the t largest eps_ij over neighbours j
    - ``sum_{j ~ i} eps_ij <= 1 - delta`` for parts with Delta(i) >= 2
    """
    diag = InequalityDiagnostics(tolerance=tol)
    for (i, j, t), gt in sorted(fv.g.items()):
        if t < 2:
            continue
        e = eps.value(i, j)
        margin = (t - 1) * e * (gt - fv.g[(i, j, t - 1)]) - e**2 * gt**2
        diag.g_increments.append(
            InequalityMargin(part=i, neighbor=j, t=t, margin=margin)
        )

    for i in fv.types:
        nbrs = G.neighbors(i)
        top = sorted((eps.value(i, j) for j in nbrs), reverse=True)
        for t in range(2, len(nbrs) + 1):
            alpha = math.fsum(top[:t])
            ht = fv.h[(i, t)]
            margin = (t - 1) * (ht - fv.h[(i, t - 1)]) - alpha * ht**2
            diag.h_increments.append(InequalityMargin(part=i, t=t, margin=margin))
        if len(nbrs) >= 2:
            diag.neighbor_sums[str(i)] = (1.0 - fv.delta) - math.fsum(top)

    diag.worst_g = min((m.margin for m in diag.g_increments), default=0.0)
    diag.worst_h = min((m.margin for m in diag.h_increments), default=0.0)
    diag.worst_neighbor_sum = min(diag.neighbor_sums.values(), default=0.0)
    return diag
