"""Scalar and matrix verification of a certificate family.

With ``k`` free types below the type set ``S``, the scalar conditions are

- disconnected ``G_S``: ``f_S = sum over components I with |I| >= 2 of f_{[d]-I}``
- connected ``G_S``: ``max_i f_S(i) <= (k-1)^2 / (3k-1)``
- ``k = 2``: every measured link eigenvalue of type ``S`` is at most ``max_i f_S(i)``
- ``k >= 3``: ``sum_{j} f_{S+j}(i) <= (k-2) f_S(i) - f_S(i)^2``

The matrix conditions instantiate ``M_tau = Pi_tau D_S / (k-1)`` on every
link and check the corresponding Loewner inequalities numerically.
"""

from __future__ import annotations

import math
from typing import Dict, FrozenSet, List, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.linalg import eigvalsh

from trickle_hdx.complex import Face, WeightedComplex, check_sweep_size
from trickle_hdx.config import MAX_SWEEP_TYPES, PSD_TOL
from trickle_hdx.decorators import op_logger, parallelize
from trickle_hdx.errors import BadParams, NotPartite
from trickle_hdx.log_system.unified_logger import UnifiedLogger
from trickle_hdx.partite import (
    DependencyGraph,
    EpsilonTable,
    dependency_graph,
    epsilon_table,
)
from trickle_hdx.spectra import second_eigenvalue, skeleton
from trickle_hdx.trickledown.certificates import FVectors

logger = UnifiedLogger.get_logger(__name__)

EXPECTATION_TOL = 1e-12


def _graph(fv: FVectors, eps: Optional[EpsilonTable]) -> DependencyGraph:
    if fv.graph is not None:
        return fv.graph
    if eps is None:
        raise BadParams(
            "certificate carries no dependency graph and no epsilon table was given"
        )
    return dependency_graph(eps)


def _check_types(X: WeightedComplex, fv: FVectors) -> None:
    if not X.is_partite:
        raise NotPartite("certificate verification needs a partite complex")
    if tuple(X.type_labels) != tuple(fv.types):
        raise BadParams(
            f"certificate types {list(fv.types)} do not match "
            f"the complex {list(X.type_labels)}"
        )


class ScalarCheck(BaseModel):
    S: List[int]
    k: int
    kind: str
    part: Optional[int] = None
    lhs: float
    rhs: float
    margin: float


class ScalarVerificationReport(BaseModel):
    checks: List[ScalarCheck] = Field(default_factory=list)
    worst: Dict[str, float] = Field(default_factory=dict)
    passed: bool = True
    tolerance: float = PSD_TOL

    @property
    def failures(self) -> List[ScalarCheck]:
        return [c for c in self.checks if c.margin < -self.tolerance]


def _sum_rule(fv: FVectors, i: int, comps: List[List[int]]) -> float:
    total = 0.0
    for comp in comps:
        if i in comp and len(comp) >= 2:
            total += fv.value(frozenset(fv.types) - set(comp), i)
    return total


@op_logger
def verify_scalar_conditions(
    X: WeightedComplex,
    fv: FVectors,
    eps: Optional[EpsilonTable] = None,
    tol: float = PSD_TOL,
    workers: int = 1,
    max_types: int = MAX_SWEEP_TYPES,
    memoize: bool = False,
) -> ScalarVerificationReport:
    """Check every S of the family against the scalar conditions.

    The base case compares against the measured epsilon table; it is
    computed from ``X`` when ``eps`` is not given.
    """
    _check_types(X, fv)
    if eps is None:
        eps = epsilon_table(
            X, workers=workers, max_types=max_types, memoize=memoize
        )
    G = _graph(fv, eps)
    report = ScalarVerificationReport(tolerance=tol)

    def add(
        S: FrozenSet[int],
        k: int,
        kind: str,
        part: Optional[int],
        lhs: float,
        rhs: float,
    ) -> None:
        check = ScalarCheck(
            S=sorted(S), k=k, kind=kind, part=part, lhs=lhs, rhs=rhs, margin=rhs - lhs
        )
        report.checks.append(check)

    for S in fv.type_sets():
        free = fv.free_types(S)
        k = len(free)
        comps = G.subgraph(free).components()
        if len(comps) > 1:
            for i in free:
                expected = _sum_rule(fv, i, comps)
                gap = abs(fv.value(S, i) - expected)
                add(S, k, "sum_rule", i, gap, 0.0)
        else:
            cap = (k - 1) ** 2 / (3 * k - 1)
            add(S, k, "cap", None, fv.max_value(S), cap)
            if k >= 3:
                for i in free:
                    lhs = math.fsum(fv.value(S | {j}, i) for j in free if j != i)
                    fi = fv.value(S, i)
                    add(S, k, "recursion", i, lhs, (k - 2) * fi - fi**2)
        if k == 2:
            i, j = free
            add(S, k, "base", None, eps.raw_value(i, j), fv.max_value(S))

    for check in report.checks:
        previous = report.worst.get(check.kind, math.inf)
        report.worst[check.kind] = min(previous, check.margin)
    report.passed = all(m >= -tol for m in report.worst.values())
    if not report.passed:
        logger.warning(f"scalar verification failed: worst margins {report.worst}")
    return report


def psd_residual(lower: np.ndarray, upper: np.ndarray) -> float:
    """Smallest eigenvalue of ``upper - lower``, scaled by the larger 1-norm.

    ``lower <= upper`` in the Loewner order iff this is >= 0.
    """
    diff = upper - lower
    diff = (diff + diff.T) / 2
    if diff.size == 0:
        return 0.0
    scale = max(np.linalg.norm(lower, 1), np.linalg.norm(upper, 1))
    if scale == 0.0:
        return 0.0
    return float(eigvalsh(diff)[0]) / scale


class FaceMatrixCheck(BaseModel):
    face: List[str]
    S: List[int]
    k: int
    branch: str
    residuals: Dict[str, float]
    expectation_gap: Optional[float] = None
    lambda2: float
    rho: float
    rho_margin: float


class MatrixVerificationReport(BaseModel):
    faces_checked: int = 0
    worst: Dict[str, float] = Field(default_factory=dict)
    worst_rho_margin: float = 0.0
    max_expectation_gap: float = 0.0
    failures: List[FaceMatrixCheck] = Field(default_factory=list)
    faces: Optional[List[FaceMatrixCheck]] = None
    passed: bool = True
    tolerance: float = PSD_TOL
    expectation_tolerance: float = EXPECTATION_TOL


def _marginals(X: WeightedComplex, idx: np.ndarray, memoize: bool = False):
    cols, incidence, weights = X.link_incidence(idx, memoize=memoize)
    w = weights / math.fsum(weights)
    return cols, incidence, w, w @ incidence.astype(float)


@parallelize
def verify_face(
    X: WeightedComplex,
    face: Face,
    fv: FVectors,
    G: DependencyGraph,
    tol: float = PSD_TOL,
    memoize: bool = False,
) -> FaceMatrixCheck:
    """Matrix conditions on the link of a single face."""
    assert X.vertex_types is not None and face.type_set is not None
    vertex_types = np.asarray(X.vertex_types)
    idx = X.resolve(face)
    S = frozenset(face.type_set)
    free = fv.free_types(S)
    k = len(free)

    cols, incidence, w, p = _marginals(X, idx, memoize)
    B = incidence.astype(float)
    W = B.T @ (w[:, None] * B)
    np.fill_diagonal(W, 0.0)
    types = vertex_types[cols]
    pi = p / k
    Pi = np.diag(pi)
    f_S = np.array([fv.value(S, int(t)) for t in types])
    m = pi * f_S / (k - 1)
    M = np.diag(m)

    residuals: Dict[str, float] = {}
    gap: Optional[float] = None
    comps = G.subgraph(free).components()
    if len(comps) > 1:
        branch = "product"
        worst = 0.0
        for comp in comps:
            members = np.isin(types, comp)
            if len(comp) < 2:
                worst = max(worst, float(np.max(np.abs(m[members]), initial=0.0)))
                continue
            eta = cols[incidence[0] & ~members]
            sigma = np.sort(np.concatenate([idx, eta]))
            sub_cols, _, _, sub_p = _marginals(X, sigma, memoize)
            sub = dict(zip(sub_cols.tolist(), sub_p.tolist()))
            size = len(comp)
            rest = frozenset(fv.types) - set(comp)
            for n in np.flatnonzero(members):
                t = int(types[n])
                m_sigma = (
                    sub.get(int(cols[n]), 0.0) / size * fv.value(rest, t) / (size - 1)
                )
                expected = m_sigma * size * (size - 1) / (k * (k - 1))
                worst = max(worst, abs(m[n] - expected))
        residuals["direct_sum"] = -worst
    elif k == 2:
        branch = "base"
    else:
        branch = "recursive"
        residuals["cap"] = psd_residual(M, (k - 1) / (3 * k - 1) * Pi)
        position = {int(c): n for n, c in enumerate(cols)}
        direct = np.zeros(len(cols))
        for n_x, x in enumerate(cols):
            sub_cols, _, _, sub_p = _marginals(X, np.sort(np.append(idx, x)), memoize)
            S_x = S | {int(types[n_x])}
            for c, val in zip(sub_cols, sub_p):
                t = int(vertex_types[c])
                direct[position[int(c)]] += (
                    pi[n_x] * (val / (k - 1)) * fv.value(S_x, t) / (k - 2)
                )
        closed = np.array(
            [
                math.fsum(fv.value(S | {j}, int(t)) for j in free if j != int(t))
                for t in types
            ]
        )
        closed = pi * closed / ((k - 1) * (k - 2))
        gap = float(np.max(np.abs(direct - closed)))
        rhs = M - (k - 1) / (k - 2) * np.diag(m**2 / pi)
        residuals["expectation"] = psd_residual(np.diag(direct), rhs)

    if k == 2:
        walk = W / (k * (k - 1))
        residuals["base_lower"] = psd_residual(walk - 2.0 * np.outer(pi, pi), M)
        residuals["base_upper"] = psd_residual(M, Pi / 5.0)

    lambda2 = second_eigenvalue(skeleton(X, face, memoize=memoize))
    rho = float(np.max(m / pi))
    return FaceMatrixCheck(
        face=face.as_list(),
        S=sorted(S),
        k=k,
        branch=branch,
        residuals=residuals,
        expectation_gap=gap,
        lambda2=lambda2,
        rho=rho,
        rho_margin=rho - lambda2,
    )


def _face_failed(check: FaceMatrixCheck, tol: float, expectation_tol: float) -> bool:
    if any(r < -tol for r in check.residuals.values()):
        return True
    if check.rho_margin < -tol:
        return True
    return check.expectation_gap is not None and check.expectation_gap > expectation_tol


@op_logger
def verify_matrix_conditions(
    X: WeightedComplex,
    fv: FVectors,
    tol: float = PSD_TOL,
    eps: Optional[EpsilonTable] = None,
    workers: int = 1,
    per_face: bool = False,
    expectation_tol: float = EXPECTATION_TOL,
    max_types: int = MAX_SWEEP_TYPES,
    memoize: bool = False,
) -> MatrixVerificationReport:
    """Loewner checks on every link of codimension >= 2.

    Each face also reports ``rho(Pi^-1 M) = max_i f_S(i) / (k-1)`` and the
    exact ``lambda2`` of its link, which must not exceed it.

    Raises:
        Disconnected: some link has a disconnected skeleton
    """
    check_sweep_size(X.d + 1, max_types)
    _check_types(X, fv)
    G = _graph(fv, eps)
    faces: List[Face] = []
    for k in range(2, X.d + 2):
        faces.extend(X.faces_of_codim(k))
    checks = verify_face(
        [
            {"X": X, "face": f, "fv": fv, "G": G, "tol": tol, "memoize": memoize}
            for f in faces
        ],
        workers=workers,
    )

    report = MatrixVerificationReport(
        faces_checked=len(checks), tolerance=tol, expectation_tolerance=expectation_tol
    )
    for check in checks:
        for name, value in check.residuals.items():
            report.worst[name] = min(report.worst.get(name, math.inf), value)
        if check.expectation_gap is not None:
            report.max_expectation_gap = max(
                report.max_expectation_gap, check.expectation_gap
            )
        if _face_failed(check, tol, expectation_tol):
            report.failures.append(check)
    report.worst_rho_margin = min((c.rho_margin for c in checks), default=0.0)
    report.passed = not report.failures
    if per_face:
        report.faces = list(checks)
    if not report.passed:
        logger.warning(f"matrix verification failed on {len(report.failures)} faces")
    return report
