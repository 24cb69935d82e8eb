"""Harmonic-weighted trickle-down conditions.

Each variant reduces, per part ``i``, to two loads that do not depend on
delta:

- condition 1 holds iff ``load1(i) <= delta**2 / 10``
- condition 2 holds iff ``load2(i) <= 1 - delta``

Margins are ``delta**2/10 - load1`` and ``(1 - delta) - load2``; a report
passes when every margin is at least ``-margin_tol``. Loads are accumulated
with ``math.fsum`` since published thresholds sit exactly on the boundary.
"""

from __future__ import annotations

import itertools
import math
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from trickle_hdx.complex import check_sweep_size, type_key
from trickle_hdx.config import DELTA_PRECISION, MARGIN_TOL, MAX_SWEEP_TYPES
from trickle_hdx.errors import DeltaOutOfRange
from trickle_hdx.partite import DependencyGraph, EpsilonTable
from trickle_hdx.trickledown.harmonic import harmonic, harmonic_floor, harmonic_tail


class Ordering(str, Enum):
    """Which epsilon gets the largest harmonic weight."""

    DECREASING = "decreasing"
    INCREASING = "increasing"


class Variant(str, Enum):
    MAIN = "main"
    AVERAGED = "averaged"
    DELTA_UNIFORM = "delta_uniform"


class PartMargins(BaseModel):
    part: int
    degree: int
    load1: float
    load2: float
    condition1: float
    condition2: float


class ConditionReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    variant: Variant
    delta: float
    ordering: Ordering
    parts: List[PartMargins]
    passed: bool = Field(alias="pass")
    worst_condition1: float
    worst_condition2: float
    delta_ceiling: float
    max_degree: int
    margin_tolerance: float

    @property
    def condition1_passed(self) -> bool:
        return self.worst_condition1 >= -self.margin_tolerance

    @property
    def condition2_passed(self) -> bool:
        return self.worst_condition2 >= -self.margin_tolerance


def _check_delta(delta: float) -> None:
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")


def ordered_weights(values: Iterable[float], ordering: Ordering) -> List[float]:
    return sorted(values, reverse=(ordering == Ordering.DECREASING))


def harmonic_weighted_sum(values: List[float], n: int) -> float:
    """sum_{l=1}^{len(values)} values[l-1] * H_n(l-1)."""
    return math.fsum(v * harmonic_tail(n, l) for l, v in enumerate(values))


def _main_loads(
    eps: EpsilonTable, G: DependencyGraph, ordering: Ordering
) -> List[Tuple[int, int, float, float]]:
    Delta = G.max_degree
    h1 = harmonic_floor(Delta - 1)
    loads = []
    for i in eps.types:
        others = [eps.raw_value(i, j) for j in eps.types if j != i]
        load1 = max(others, default=0.0) * h1
        nbrs = ordered_weights((eps.raw_value(i, j) for j in G.neighbors(i)), ordering)
        deg = len(nbrs)
        load2 = harmonic_weighted_sum(nbrs, deg - 1) if deg else 0.0
        loads.append((i, deg, load1, load2))
    return loads


def _averaged_loads(
    eps: EpsilonTable, d: int, ordering: Ordering
) -> List[Tuple[int, int, float, float]]:
    Hd = harmonic(d)
    loads = []
    for i in eps.types:
        others = ordered_weights(
            (eps.value(i, j) for j in eps.types if j != i), ordering
        )
        load1 = max(others, default=0.0) * Hd
        load2 = harmonic_weighted_sum(others[:d], d)
        loads.append((i, len(others), load1, load2))
    return loads


def _delta_uniform_loads(
    eps: EpsilonTable, G: DependencyGraph
) -> List[Tuple[int, int, float, float]]:
    Delta = max(G.max_degree, 1)
    log_delta = math.log(Delta)
    gamma2 = eps.gamma2
    return [
        (i, G.degree(i), gamma2 * (1.0 + log_delta), gamma2 * (Delta + log_delta))
        for i in eps.types
    ]


def _report(
    variant: Variant,
    delta: float,
    ordering: Ordering,
    loads: List[Tuple[int, int, float, float]],
    max_degree: int,
    margin_tol: float,
) -> ConditionReport:
    rhs1 = delta**2 / 10.0
    rhs2 = 1.0 - delta
    parts = [
        PartMargins(
            part=i,
            degree=deg,
            load1=l1,
            load2=l2,
            condition1=rhs1 - l1,
            condition2=rhs2 - l2,
        )
        for i, deg, l1, l2 in loads
    ]
    worst1 = min((p.condition1 for p in parts), default=rhs1)
    worst2 = min((p.condition2 for p in parts), default=rhs2)
    ceiling = 1.0 - max((p.load2 for p in parts), default=0.0)
    return ConditionReport(
        variant=variant,
        delta=delta,
        ordering=ordering,
        parts=parts,
        passed=worst1 >= -margin_tol and worst2 >= -margin_tol,
        worst_condition1=worst1,
        worst_condition2=worst2,
        delta_ceiling=ceiling,
        max_degree=max_degree,
        margin_tolerance=margin_tol,
    )


def check_main_conditions(
    eps: EpsilonTable,
    G: DependencyGraph,
    delta: float,
    ordering: Ordering = Ordering.DECREASING,
    margin_tol: float = MARGIN_TOL,
) -> ConditionReport:
    """Per-part margins of the two degree-weighted conditions.

    Condition 1: ``eps_ij * H_{Delta-1} <= delta^2/10`` for every ``j != i``
    (``H_{Delta-1}`` is taken as 1 when ``Delta <= 1``).
    Condition 2: ``sum_l eps_{i,j_l} * H_{Delta(i)-1}(l-1) <= 1 - delta`` over
    the neighbours of ``i`` in ``G``, ordered by ``ordering``.

    Raises:
        DeltaOutOfRange: delta not in (0, 1)
    """
    _check_delta(delta)
    loads = _main_loads(eps, G, Ordering(ordering))
    return _report(
        Variant.MAIN, delta, Ordering(ordering), loads, G.max_degree, margin_tol
    )


def check_averaged_conditions(
    eps: EpsilonTable,
    delta: float,
    d: Optional[int] = None,
    ordering: Ordering = Ordering.DECREASING,
    margin_tol: float = MARGIN_TOL,
) -> ConditionReport:
    """The dependency-free variant, weighting all ``d`` other parts by ``H_d``.

    Condition 2 is reported multiplied through by ``d``:
    ``sum_{l=1}^{d} eps_{i,j_l} * H_d(l-1) <= 1 - delta``.
    """
    _check_delta(delta)
    if d is None:
        d = eps.num_types - 1
    loads = _averaged_loads(eps, d, Ordering(ordering))
    return _report(Variant.AVERAGED, delta, Ordering(ordering), loads, d, margin_tol)


def check_delta_uniform_conditions(
    eps: EpsilonTable,
    G: DependencyGraph,
    delta: float,
    margin_tol: float = MARGIN_TOL,
) -> ConditionReport:
    """Hypotheses of the max-degree variant, scaled to the common form.

    ``gamma2 <= delta^2 / (10(1 + ln Delta))`` and
    ``gamma2 <= (1 - delta) / (Delta + ln Delta)``; Delta = 0 is treated as 1.
    """
    _check_delta(delta)
    loads = _delta_uniform_loads(eps, G)
    return _report(
        Variant.DELTA_UNIFORM,
        delta,
        Ordering.DECREASING,
        loads,
        G.max_degree,
        margin_tol,
    )


def check_conditions(
    variant: Variant,
    eps: EpsilonTable,
    G: DependencyGraph,
    delta: float,
    ordering: Ordering = Ordering.DECREASING,
    margin_tol: float = MARGIN_TOL,
) -> ConditionReport:
    variant = Variant(variant)
    if variant == Variant.MAIN:
        return check_main_conditions(eps, G, delta, ordering, margin_tol)
    if variant == Variant.AVERAGED:
        return check_averaged_conditions(eps, delta, None, ordering, margin_tol)
    return check_delta_uniform_conditions(eps, G, delta, margin_tol)


def max_feasible_delta(
    eps: EpsilonTable,
    G: DependencyGraph,
    variant: Variant = Variant.MAIN,
    ordering: Ordering = Ordering.DECREASING,
    precision: float = DELTA_PRECISION,
    margin_tol: float = MARGIN_TOL,
) -> Optional[float]:
    """Largest delta in (0, 1) at which ``variant`` passes, or None.

    Condition 2 only gets harder as delta grows and condition 1 only gets
    easier, so the answer is the upper end of the condition-2 region,
    located by bisection and then snapped to the exact ceiling when that
    passes. If every epsilon is 0 the supremum 1 is reported as ``1 - precision``.
    """

    def check(delta: float) -> ConditionReport:
        return check_conditions(variant, eps, G, delta, ordering, margin_tol)

    top = 1.0 - precision
    if check(top).condition2_passed:
        best = top
    elif not check(precision).condition2_passed:
        return None
    else:
        lo, hi = precision, top
        while hi - lo > precision:
            mid = (lo + hi) / 2
            if check(mid).condition2_passed:
                lo = mid
            else:
                hi = mid
        best = lo
        ceiling = check(lo).delta_ceiling
        if lo <= ceiling < 1.0 and check(ceiling).condition2_passed:
            best = ceiling

    return best if check(best).passed else None


def delta_sweep(
    eps: EpsilonTable,
    G: DependencyGraph,
    deltas: Iterable[float],
    variant: Variant = Variant.MAIN,
    ordering: Ordering = Ordering.DECREASING,
    margin_tol: float = MARGIN_TOL,
) -> List[ConditionReport]:
    """Condition reports over a delta grid, failing points included."""
    return [check_conditions(variant, eps, G, d, ordering, margin_tol) for d in deltas]


def per_link_conditions(
    eps: EpsilonTable,
    G: DependencyGraph,
    delta: float,
    ordering: Ordering = Ordering.DECREASING,
    margin_tol: float = MARGIN_TOL,
    max_types: int = MAX_SWEEP_TYPES,
) -> Dict[str, ConditionReport]:
    """Main conditions evaluated on each link type's own dependency subgraph.

    Keys are the type sets ``S`` of the link faces (``""`` for the whole
    complex); only ``S`` leaving at least two free types are listed.
    """
    types = eps.types
    check_sweep_size(len(types), max_types)
    reports: Dict[str, ConditionReport] = {}
    for size in range(0, len(types) - 1):
        for S in itertools.combinations(types, size):
            rest = [t for t in types if t not in S]
            reports[type_key(S)] = check_main_conditions(
                eps.restrict(rest), G.subgraph(rest), delta, ordering, margin_tol
            )
    return reports
