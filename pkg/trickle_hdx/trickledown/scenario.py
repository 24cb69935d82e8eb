"""Threshold arithmetic for uniform epsilon patterns.

A scenario is a dependency graph of maximum degree ``Delta`` with the same
epsilon on every edge. The worst part is the centre of a star with ``Delta``
leaves, so the main conditions are evaluated on that star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from trickle_hdx.config import MARGIN_TOL
from trickle_hdx.errors import BadParams, DeltaOutOfRange
from trickle_hdx.partite import EpsilonTable, dependency_graph
from trickle_hdx.trickledown.bounds import main_constant
from trickle_hdx.trickledown.conditions import (
    ConditionReport,
    check_main_conditions,
    max_feasible_delta,
)


class ScenarioReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    Delta: int
    eps: float
    delta: Optional[float]
    passed: bool = Field(alias="pass")
    condition1_margin: Optional[float] = None
    condition2_margin: Optional[float] = None
    delta_star: Optional[float] = None
    c: Optional[float] = None
    bound_coeff: Optional[float] = None
    family: Optional[str] = None
    p: Optional[float] = None
    stated_threshold: Optional[int] = None
    margin_tolerance: float = MARGIN_TOL


def _star(Delta: int, eps: float):
    edges = [(0, j) for j in range(1, Delta + 1)]
    table = EpsilonTable.uniform(range(Delta + 1), edges, eps)
    return table, dependency_graph(table, tol=0.0)


def scenario_calculator(
    Delta: int,
    eps_uniform: float,
    delta: Optional[float] = None,
    margin_tol: float = MARGIN_TOL,
) -> ScenarioReport:
    """Evaluate both conditions for a uniform pattern.

    Without ``delta`` the report is taken at the largest feasible delta. The
    coefficient ``c(delta)(1 - delta)/delta`` gives the bound on gamma_k once
    divided by ``k - 1``.
    """
    if Delta < 1:
        raise BadParams(f"Delta must be at least 1, got {Delta}")
    if not (0.0 <= eps_uniform < 1.0):
        raise BadParams(f"uniform epsilon must lie in [0, 1), got {eps_uniform}")
    if delta is not None and not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")

    eps, G = _star(Delta, eps_uniform)
    delta_star = max_feasible_delta(eps, G, margin_tol=margin_tol)
    at = delta if delta is not None else delta_star

    report: Optional[ConditionReport] = None
    if at is not None:
        report = check_main_conditions(eps, G, at, margin_tol=margin_tol)
    c = main_constant(at) if at is not None else None
    return ScenarioReport(
        Delta=Delta,
        eps=eps_uniform,
        delta=at,
        passed=report is not None and report.passed,
        condition1_margin=report.worst_condition1 if report else None,
        condition2_margin=report.worst_condition2 if report else None,
        delta_star=delta_star,
        c=c,
        bound_coeff=c * (1.0 - at) / at if c is not None and at is not None else None,
        margin_tolerance=margin_tol,
    )


@dataclass(frozen=True)
class ScenarioFamily:
    """A published parametrization of epsilon and delta by a field size p."""

    name: str
    Delta: int
    stated_threshold: int
    eps: Callable[[float], float]
    delta: Callable[[float], float]


SCENARIOS: Dict[str, ScenarioFamily] = {
    "ko": ScenarioFamily(
        name="ko",
        Delta=2,
        stated_threshold=193,
        eps=lambda p: 1.0 / math.sqrt(p),
        delta=lambda p: 1.0 - 2.0 / math.sqrt(p),
    ),
    "op-abc": ScenarioFamily(
        name="op-abc",
        Delta=2,
        stated_threshold=376,
        eps=lambda p: math.sqrt(2.0 / p),
        delta=lambda p: 1.0 - 2.0 * math.sqrt(2.0 / p),
    ),
    "op-d": ScenarioFamily(
        name="op-d",
        Delta=3,
        stated_threshold=729,
        eps=lambda p: math.sqrt(2.0 / p),
        delta=lambda p: 1.0 - 3.5 * math.sqrt(2.0 / p),
    ),
}


def _family(name: str) -> ScenarioFamily:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise BadParams(
            f"unknown scenario family {name!r}; known: {sorted(SCENARIOS)}"
        ) from None


def family_scenario(
    name: str, p: float, margin_tol: float = MARGIN_TOL
) -> ScenarioReport:
    """Scenario of a named family at field size ``p``.

    A ``p`` small enough to push epsilon to 1 or delta out of (0, 1) yields a
    failing report instead of an error.
    """
    fam = _family(name)
    eps, delta = fam.eps(p), fam.delta(p)
    if not (0.0 <= eps < 1.0) or not (0.0 < delta < 1.0):
        report = ScenarioReport(Delta=fam.Delta, eps=eps, delta=delta, passed=False)
    else:
        report = scenario_calculator(fam.Delta, eps, delta, margin_tol=margin_tol)
    report.family = fam.name
    report.p = p
    report.stated_threshold = fam.stated_threshold
    return report


def minimal_passing_p(
    name: str, p_max: int = 1_000_000, margin_tol: float = MARGIN_TOL
) -> Optional[int]:
    """Smallest integer p at which the family passes, by bisection over p.

    Passing is monotone in p for every family. Returns None when ``p_max``
    itself fails.
    """
    def passes(p: int) -> bool:
        return family_scenario(name, p, margin_tol).passed

    if not passes(p_max):
        return None
    lo, hi = 1, p_max
    if passes(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi


class ColoringScenario(BaseModel):
    Delta: int
    eta: float
    premise_lhs: float
    premise_rhs: float
    premise_holds: bool
    eps_ceiling: float
    delta: float
    scenario: ScenarioReport
    coefficient: float


def coloring_scenario(
    Delta: int, eta: float, margin_tol: float = MARGIN_TOL
) -> ColoringScenario:
    """List colourings with ``|L(i)| - Delta(i) >= (1 + eta) Delta``.

    The premise ``(1 + ln Delta)/Delta <= eta^2/40`` and the epsilon ceiling
    ``1/((1+eta)Delta) + 1/((1+eta)^2 Delta^2)`` are reported together with
    the conditions at ``delta = eta/2``; ``coefficient / (k - 1)`` bounds gamma_k.
    """
    if Delta < 1:
        raise BadParams(f"Delta must be at least 1, got {Delta}")
    if not (0.0 < eta < 2.0):
        raise BadParams(f"eta must lie in (0, 2), got {eta}")
    lhs = (1.0 + math.log(Delta)) / Delta
    rhs = eta**2 / 40.0
    ceiling = 1.0 / ((1.0 + eta) * Delta) + 1.0 / ((1.0 + eta) ** 2 * Delta**2)
    delta = eta / 2.0
    scenario = scenario_calculator(Delta, min(ceiling, 1.0 - 1e-12), delta, margin_tol)
    return ColoringScenario(
        Delta=Delta,
        eta=eta,
        premise_lhs=lhs,
        premise_rhs=rhs,
        premise_holds=lhs <= rhs,
        eps_ceiling=ceiling,
        delta=delta,
        scenario=scenario,
        coefficient=main_constant(delta) * (1.0 - delta) / delta,
    )
