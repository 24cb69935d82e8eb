"""Exact link eigenvalues next to every available bound."""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from trickle_hdx.complex import WeightedComplex, type_key
from trickle_hdx.config import MAX_SWEEP_TYPES, PSD_TOL
from trickle_hdx.decorators import op_logger
from trickle_hdx.errors import CertificateInvalid, ConditionUnsatisfiable
from trickle_hdx.partite import EpsilonTable, epsilon_table
from trickle_hdx.spectra import SpectralProfile, spectral_profile
from trickle_hdx.trickledown.bounds import (
    classical_bound,
    main_bound,
    max_degree_or_none,
)
from trickle_hdx.trickledown.certificates import FVectors
from trickle_hdx.trickledown.conditions import check_main_conditions
from trickle_hdx.trickledown.verify import (
    ScalarVerificationReport,
    verify_scalar_conditions,
)


class BoundRow(BaseModel):
    k: int
    exact: Optional[float] = None
    certified: Optional[float] = None
    main: Optional[float] = None
    classical: Optional[float] = None
    max_degree: Optional[float] = None
    slack: Dict[str, float] = Field(default_factory=dict)


class TypeBoundRow(BaseModel):
    S: List[int]
    k: int
    exact: Optional[float] = None
    certified: float
    slack: Optional[float] = None


class BoundProfile(BaseModel):
    d: int
    delta: float
    rows: List[BoundRow]
    per_type: List[TypeBoundRow]
    worst_certified_slack: Optional[float] = None
    tolerance: float = PSD_TOL


def _slack(bound: Optional[float], exact: Optional[float]) -> Optional[float]:
    if bound is None or exact is None:
        return None
    return bound - exact


@op_logger
def bound_profile(
    X: WeightedComplex,
    fv: FVectors,
    scalar_report: Optional[ScalarVerificationReport] = None,
    eps: Optional[EpsilonTable] = None,
    spectral: Optional[SpectralProfile] = None,
    workers: int = 1,
    tol: float = PSD_TOL,
    max_types: int = MAX_SWEEP_TYPES,
    memoize: bool = False,
) -> BoundProfile:
    """Certified ``max_i f_S(i) / (k-1)`` per type set and per k, against exact gamma_k.

    Raises:
        CertificateInvalid: the scalar verification did not pass
    """
    if eps is None:
        eps = epsilon_table(
            X, workers=workers, max_types=max_types, memoize=memoize
        )
    if scalar_report is None:
        scalar_report = verify_scalar_conditions(X, fv, eps=eps, tol=tol)
    if not scalar_report.passed:
        raise CertificateInvalid(
            f"scalar verification failed with worst margins {scalar_report.worst}"
        )
    if spectral is None:
        spectral = spectral_profile(
            X, workers=workers, max_types=max_types, memoize=memoize
        )
    exact_per_type = spectral.per_type or {}

    per_type: List[TypeBoundRow] = []
    certified_k: Dict[int, float] = {}
    for size in range(len(fv.types) - 2, -1, -1):
        for S in itertools.combinations(fv.types, size):
            k = len(fv.types) - size
            certified = fv.max_value(S) / (k - 1)
            certified_k[k] = max(certified_k.get(k, 0.0), certified)
            exact = exact_per_type.get(type_key(S))
            per_type.append(
                TypeBoundRow(
                    S=list(S),
                    k=k,
                    exact=exact,
                    certified=certified,
                    slack=_slack(certified, exact),
                )
            )

    d = X.d
    G = fv.graph
    main_ok = (
        G is not None and check_main_conditions(eps, G, fv.delta, fv.ordering).passed
    )
    try:
        classical = classical_bound(eps.gamma2, d)
    except ConditionUnsatisfiable:
        classical = None
    max_degree = None
    if G is not None:
        max_degree = max_degree_or_none(eps.gamma2, G.max_degree, fv.delta, d)

    rows: List[BoundRow] = []
    for k in range(2, d + 2):
        row = BoundRow(
            k=k,
            exact=spectral.gamma_k(k),
            certified=certified_k.get(k),
            main=main_bound(fv.delta, k) if main_ok else None,
        )
        if classical is not None:
            row.classical = classical.per_k.get(str(k), classical.coarse)
        if max_degree is not None:
            row.max_degree = max_degree.per_k[str(k)].bound
        for name in ("certified", "main", "classical", "max_degree"):
            slack = _slack(getattr(row, name), row.exact)
            if slack is not None:
                row.slack[name] = slack
        rows.append(row)

    slacks = [r.slack for r in per_type if r.slack is not None]
    return BoundProfile(
        d=d,
        delta=fv.delta,
        rows=rows,
        per_type=per_type,
        worst_certified_slack=min(slacks) if slacks else None,
        tolerance=tol,
    )
