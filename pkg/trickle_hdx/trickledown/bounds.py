"""Closed-form trickle-down bounds.

``classical_bound`` is the dimension-based bound, ``max_degree_bounds`` the
max-degree variant, ``main_bound`` the bound certified by the f-vector
construction. All return bounds on gamma_k for k = 2..d+1.
"""

from __future__ import annotations

import math
from typing import Dict, Optional

from pydantic import BaseModel

from trickle_hdx.errors import (
    BadParams,
    ConditionUnsatisfiable,
    DeltaOutOfRange,
    HypothesisViolated,
)


def main_constant(delta: float) -> float:
    """c(delta) = 2(1 + delta^2/10) / (1 + delta)."""
    return 2.0 * (1.0 + delta**2 / 10.0) / (1.0 + delta)


def main_bound(delta: float, k: int) -> float:
    """c(delta)(1 - delta) / ((k - 1) delta)."""
    if not (0.0 < delta <= 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1], got {delta}")
    if k < 2:
        raise BadParams(f"bounds are stated for k >= 2, got {k}")
    return main_constant(delta) * (1.0 - delta) / ((k - 1) * delta)


def trickle_step(lam: float) -> float:
    """Smallest alpha with ``lam <= alpha - alpha^2 (1 - lam)``: ``lam / (1 - lam)``."""
    if lam >= 1.0:
        raise ConditionUnsatisfiable(f"one trickle step needs lambda < 1, got {lam}")
    return lam / (1.0 - lam)


class ClassicalBound(BaseModel):
    gamma2: float
    d: int
    delta: float
    per_k: Dict[str, float]
    coarse: float


def classical_bound(gamma2: float, d: int) -> ClassicalBound:
    """Bounds from gamma_2 alone.

    Each level is one ``trickle_step`` above the last, which with
    ``1 - delta = d * gamma2`` gives
    ``gamma_k <= (1 - delta) / (d - (k - 2)(1 - delta))`` for k = 2..d, and
    the coarse ``(1 - delta) / (d * delta)`` also covers k = d + 1.

    Raises:
        ConditionUnsatisfiable: ``gamma2 >= 1/d``
    """
    if d < 1:
        raise BadParams(f"dimension must be positive, got {d}")
    g = max(gamma2, 0.0)
    if g * d >= 1.0:
        raise ConditionUnsatisfiable(f"gamma2 = {gamma2} is not below 1/d = {1.0 / d}")
    one_minus = d * g
    delta = 1.0 - one_minus
    per_k: Dict[str, float] = {}
    lam = g
    for k in range(2, d + 1):
        per_k[str(k)] = lam
        lam = trickle_step(lam)
    coarse = one_minus / (d * delta)
    return ClassicalBound(gamma2=gamma2, d=d, delta=delta, per_k=per_k, coarse=coarse)


class MaxDegreeEntry(BaseModel):
    k: int
    branch: str
    delta_k: float
    stated: float
    composed: float
    tighter: str
    bound: float


class MaxDegreeBounds(BaseModel):
    gamma2: float
    Delta: int
    delta: float
    per_k: Dict[str, MaxDegreeEntry]


def check_max_degree_hypotheses(gamma2: float, Delta: int, delta: float) -> None:
    """Raise HypothesisViolated naming the first failing hypothesis."""
    log_delta = math.log(max(Delta, 1))
    rhs1 = delta**2 / (10.0 * (1.0 + log_delta))
    if gamma2 > rhs1:
        raise HypothesisViolated(
            "gamma2 <= delta^2 / (10 (1 + ln Delta))", gamma2, rhs1
        )
    rhs2 = (1.0 - delta) / (max(Delta, 1) + log_delta)
    if gamma2 > rhs2:
        raise HypothesisViolated(
            "gamma2 <= (1 - delta) / (Delta + ln Delta)", gamma2, rhs2
        )


def max_degree_bounds(
    gamma2: float, Delta: int, delta: float, d: int, prefer: str = "stated"
) -> MaxDegreeBounds:
    """Per-k bounds of the max-degree variant.

    For ``k >= Delta`` the bound is ``c(delta)(1 - delta) / (k delta)``.
    For ``k < Delta`` the proof runs at
    ``delta_k = 1 - (1 - delta)(k + ln k)/(Delta + ln Delta)``; both the stated
    form ``c(delta)(1 - delta_k)/(k delta)`` and the composed
    ``c(delta_k)(1 - delta_k)/(k delta_k)`` are reported. ``prefer`` selects
    which one fills ``bound``: ``"stated"`` or ``"tighter"``.

    Raises:
        DeltaOutOfRange: delta not in (0, 1)
        HypothesisViolated: a hypothesis on gamma2 fails
    """
    if not (0.0 < delta < 1.0):
        raise DeltaOutOfRange(f"delta must lie in (0, 1), got {delta}")
    if prefer not in ("stated", "tighter"):
        raise BadParams(f"prefer must be 'stated' or 'tighter', got {prefer!r}")
    check_max_degree_hypotheses(gamma2, Delta, delta)

    c = main_constant(delta)
    D = max(Delta, 1)
    denom = D + math.log(D)
    per_k: Dict[str, MaxDegreeEntry] = {}
    for k in range(2, d + 2):
        if k >= Delta:
            value = c * (1.0 - delta) / (k * delta)
            entry = MaxDegreeEntry(
                k=k,
                branch="k>=Delta",
                delta_k=delta,
                stated=value,
                composed=value,
                tighter="stated",
                bound=value,
            )
        else:
            delta_k = 1.0 - (1.0 - delta) * (k + math.log(k)) / denom
            stated = c * (1.0 - delta_k) / (k * delta)
            composed = main_constant(delta_k) * (1.0 - delta_k) / (k * delta_k)
            tighter = "stated" if stated <= composed else "composed"
            bound = stated if prefer == "stated" else min(stated, composed)
            entry = MaxDegreeEntry(
                k=k,
                branch="k<Delta",
                delta_k=delta_k,
                stated=stated,
                composed=composed,
                tighter=tighter,
                bound=bound,
            )
        per_k[str(k)] = entry
    return MaxDegreeBounds(gamma2=gamma2, Delta=Delta, delta=delta, per_k=per_k)


def max_degree_or_none(
    gamma2: float, Delta: int, delta: float, d: int
) -> Optional[MaxDegreeBounds]:
    try:
        return max_degree_bounds(gamma2, Delta, delta, d)
    except HypothesisViolated:
        return None
