"""Link 1-skeletons, walk matrices and second eigenvalues.

The walk on a skeleton is P = D^-1 W. Its spectrum is read off the symmetric
matrix D^-1/2 W D^-1/2, which has the same eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.linalg import eigvalsh
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import LinearOperator, eigsh

from trickle_hdx.complex import (
    Face,
    FaceLike,
    WeightedComplex,
    check_sweep_size,
    type_key,
)
from trickle_hdx.config import DENSE_LIMIT, EIG_TOL, MAX_SWEEP_TYPES
from trickle_hdx.decorators import op_logger, parallelize
from trickle_hdx.errors import BadParams, CodimTooSmall, Disconnected, EmptyOrFullSet
from trickle_hdx.log_system.unified_logger import UnifiedLogger

logger = UnifiedLogger.get_logger(__name__)


@dataclass(frozen=True)
class WalkMatrices:
    """Row-stochastic walk ``P`` and the diagonal stationary measure ``Pi``."""

    P: np.ndarray
    Pi: np.ndarray

    @property
    def pi(self) -> np.ndarray:
        return np.diag(self.Pi)


@dataclass(frozen=True, eq=False)
class SkeletonGraph:
    """Weighted graph on the vertices of a link.

    ``weights[x, y]`` is the probability that a facet of the link contains
    both ``x`` and ``y``. The diagonal is zero unless ``has_loops``.
    """

    vertices: Tuple[str, ...]
    weights: np.ndarray
    face: Optional[Face] = None
    has_loops: bool = False

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @cached_property
    def components(self) -> List[List[int]]:
        n = len(self.vertices)
        adjacency = csr_matrix(self.weights > 0)
        count, labels = connected_components(adjacency, directed=False)
        return [np.flatnonzero(labels == c).tolist() for c in range(count)] if n else []

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def subset_mask(self, S: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self.vertices), dtype=bool)
        for v in S:
            if v not in self.index:
                raise BadParams(f"vertex {v!r} is not in the graph")
            mask[self.index[v]] = True
        return mask

    def volume(self, S: Iterable[str]) -> float:
        return float(self.degrees[self.subset_mask(S)].sum())

    def edge_weight(self, x: str, y: str) -> float:
        return float(self.weights[self.index[x], self.index[y]])

    def edges(self) -> Dict[Tuple[str, str], float]:
        rows, cols = np.nonzero(np.triu(self.weights, k=0 if self.has_loops else 1))
        return {
            (self.vertices[r], self.vertices[c]): float(self.weights[r, c])
            for r, c in zip(rows, cols)
        }

    def walk(self) -> WalkMatrices:
        deg = self.degrees
        P = self.weights / deg[:, None]
        return WalkMatrices(P=P, Pi=np.diag(deg / deg.sum()))

    def normalized_adjacency(self) -> np.ndarray:
        s = 1.0 / np.sqrt(self.degrees)
        A = s[:, None] * self.weights * s[None, :]
        return (A + A.T) / 2


def _skeleton_from_incidence(
    X: WeightedComplex,
    cols: np.ndarray,
    incidence: np.ndarray,
    weights: np.ndarray,
    face: Optional[Face],
) -> SkeletonGraph:
    B = incidence.astype(float)
    W = B.T @ (weights[:, None] * B)
    np.fill_diagonal(W, 0.0)
    W /= math.fsum(weights)
    return SkeletonGraph(
        vertices=tuple(X.vertices[c] for c in cols), weights=W, face=face
    )


def skeleton(
    X: WeightedComplex, tau: FaceLike, memoize: bool = False
) -> SkeletonGraph:
    """Weighted 1-skeleton of the link of ``tau``.

    Raises:
        CodimTooSmall: the link has no edges (codim < 2)
    """
    idx = X.resolve(tau)
    face = X.make_face(idx.tolist())
    if face.codim < 2:
        raise CodimTooSmall(f"skeleton needs codim >= 2, face has codim {face.codim}")
    cols, incidence, weights = X.link_incidence(idx, memoize=memoize)
    return _skeleton_from_incidence(X, cols, incidence, weights, face)


def ground_skeleton(X: WeightedComplex) -> SkeletonGraph:
    """1-skeleton of the complex itself (the link of the empty face)."""
    return skeleton(X, ())


def quotient_skeleton(
    G: SkeletonGraph, blocks: Mapping[str, Sequence[str]]
) -> SkeletonGraph:
    """Aggregate ``G`` over a vertex partition, keeping intra-block weight as loops.

    For an equitable partition the walk on the quotient has eigenvalues that
    are eigenvalues of the walk on ``G``.
    """
    names = list(blocks)
    member = np.zeros((len(names), len(G.vertices)))
    for b, name in enumerate(names):
        member[b, G.subset_mask(blocks[name])] = 1.0
    if not np.array_equal(member.sum(axis=0), np.ones(len(G.vertices))):
        raise BadParams("blocks must partition the vertex set")
    Wq = member @ G.weights @ member.T
    return SkeletonGraph(vertices=tuple(names), weights=Wq, face=G.face, has_loops=True)


def _raise_disconnected(G: SkeletonGraph) -> None:
    comps = [[G.vertices[i] for i in comp] for comp in G.components]
    where = f" in the link of {G.face.as_list()}" if G.face is not None else ""
    raise Disconnected(
        f"skeleton{where} has {len(comps)} components",
        components=comps,
        face=G.face.as_list() if G.face is not None else None,
    )


def _second_eigenvalue_iterative(G: SkeletonGraph, tol: float) -> float:
    s = 1.0 / np.sqrt(G.degrees)
    A = csr_matrix(s[:, None] * G.weights * s[None, :])
    top = np.sqrt(G.degrees)
    top /= np.linalg.norm(top)

    # Shift the Perron vector to -2, below the rest of the spectrum.
    def matvec(x: np.ndarray) -> np.ndarray:
        x = np.ravel(x)
        return A @ x - 3.0 * top * (top @ x)

    n = len(G.vertices)
    op = LinearOperator((n, n), matvec=matvec, dtype=float)
    vals = eigsh(op, k=1, which="LA", tol=tol, return_eigenvectors=False)
    return float(vals[0])


def second_eigenvalue(
    G: SkeletonGraph, dense_limit: int = DENSE_LIMIT, tol: float = EIG_TOL
) -> float:
    """Signed second-largest eigenvalue of the walk on ``G``.

    Raises:
        Disconnected: ``G`` has more than one component (lambda2 would be 1)
    """
    if len(G.vertices) < 2:
        raise BadParams("a walk needs at least two vertices")
    if not G.is_connected:
        _raise_disconnected(G)
    if len(G.vertices) > dense_limit:
        return _second_eigenvalue_iterative(G, tol)
    vals = eigvalsh(G.normalized_adjacency())
    return float(vals[-2])


def walk_spectrum(G: SkeletonGraph) -> np.ndarray:
    """All eigenvalues of the walk on ``G``, in descending order."""
    vals = eigvalsh(G.normalized_adjacency())
    return vals[::-1]


class FaceEigenvalue(BaseModel):
    face: List[str]
    codim: int
    type_set: Optional[List[int]] = None
    lambda2: Optional[float] = None


class DisconnectedWitness(BaseModel):
    face: List[str]
    codim: int
    components: List[List[str]]


class SpectralProfile(BaseModel):
    """Worst second eigenvalue per codimension."""

    d: int
    gamma: Dict[str, float] = Field(default_factory=dict)
    argmax_faces: Dict[str, List[str]] = Field(default_factory=dict)
    witnesses: List[DisconnectedWitness] = Field(default_factory=list)
    per_type: Optional[Dict[str, float]] = None
    per_face: Optional[List[FaceEigenvalue]] = None
    tolerance: float = EIG_TOL

    @property
    def totally_connected(self) -> bool:
        return not self.witnesses

    def gamma_k(self, k: int) -> Optional[float]:
        return self.gamma.get(str(k))


@parallelize
def face_lambda2(
    X: WeightedComplex,
    face: Face,
    dense_limit: int = DENSE_LIMIT,
    tol: float = EIG_TOL,
    memoize: bool = False,
) -> Tuple[Optional[float], List[List[str]]]:
    """lambda2 of the link of ``face``, or ``(None, components)`` if disconnected."""
    idx = X.resolve(face)
    cols, incidence, weights = X.link_incidence(idx, memoize=memoize)
    G = _skeleton_from_incidence(X, cols, incidence, weights, face)
    try:
        return second_eigenvalue(G, dense_limit=dense_limit, tol=tol), []
    except Disconnected as e:
        return None, e.components


@op_logger
def spectral_profile(
    X: WeightedComplex,
    per_face: bool = False,
    workers: int = 1,
    dense_limit: int = DENSE_LIMIT,
    tol: float = EIG_TOL,
    max_types: int = MAX_SWEEP_TYPES,
    memoize: bool = False,
) -> SpectralProfile:
    """gamma_k for every k in 2..d+1, sweeping every face of codimension k.

    Disconnected links are reported as witnesses and left out of gamma_k.
    Faces are visited in sorted order and ties keep the first face, so the
    report does not depend on ``workers``.
    """
    check_sweep_size(X.d + 1, max_types)
    profile = SpectralProfile(d=X.d, tolerance=tol)
    per_type: Dict[str, float] = {}
    rows: List[FaceEigenvalue] = []

    for k in range(2, X.d + 2):
        faces = X.faces_of_codim(k)
        results = face_lambda2(
            [
                {
                    "X": X,
                    "face": f,
                    "dense_limit": dense_limit,
                    "tol": tol,
                    "memoize": memoize,
                }
                for f in faces
            ],
            workers=workers,
        )
        best: Optional[float] = None
        best_face: Optional[Face] = None
        for face, (value, components) in zip(faces, results):
            types = sorted(face.type_set) if face.type_set is not None else None
            if per_face:
                rows.append(
                    FaceEigenvalue(
                        face=face.as_list(), codim=k, type_set=types, lambda2=value
                    )
                )
            if value is None:
                profile.witnesses.append(
                    DisconnectedWitness(
                        face=face.as_list(), codim=k, components=components
                    )
                )
                continue
            if best is None or value > best:
                best, best_face = value, face
            if types is not None:
                key = type_key(types)
                per_type[key] = max(per_type.get(key, -1.0), value)
        if best is not None and best_face is not None:
            profile.gamma[str(k)] = best
            profile.argmax_faces[str(k)] = best_face.as_list()
        logger.debug(f"codim {k}: {len(faces)} faces, gamma={best}")

    if X.is_partite:
        profile.per_type = per_type
    if per_face:
        profile.per_face = rows
    if profile.witnesses:
        logger.warning(f"{len(profile.witnesses)} disconnected links found")
    return profile


class CutDiagnostics(BaseModel):
    """Cut statistics of a vertex subset against the walk spectrum."""

    conductance: float
    mixing_residual: float
    mixing_excess: float
    lambda2_lower_bound: float
    volume: float
    total_volume: float
    lambda2: Optional[float] = None
    cheeger_ceiling: Optional[float] = None


def cut_diagnostics(
    G: SkeletonGraph, S: Iterable[str], lambda2: Optional[float] = None
) -> CutDiagnostics:
    """Conductance and expander-mixing statistics of the cut ``(S, V - S)``.

    ``w(E(S))`` sums ``w(x, y)`` over ordered pairs in ``S``. Then

    - ``lambda2_lower_bound`` =
      (w(E(S)) - vol(S)^2/vol(V)) / (vol(S)(1 - vol(S)/vol(V)))
      never exceeds lambda2;
    - ``mixing_residual`` = |w(E(S)) - vol(S)^2/vol(V)| / vol(S) never exceeds
      the largest nontrivial eigenvalue in absolute value;
    - ``conductance`` never exceeds ``cheeger_ceiling`` = sqrt(2(1 - lambda2)).

    Raises:
        EmptyOrFullSet: ``S`` is empty or all of V
    """
    mask = G.subset_mask(S)
    if not mask.any() or mask.all():
        raise EmptyOrFullSet("the cut needs a proper nonempty vertex subset")
    deg = G.degrees
    vol_s = float(deg[mask].sum())
    vol_v = float(deg.sum())
    cut = float(G.weights[np.ix_(mask, ~mask)].sum())
    internal = float(G.weights[np.ix_(mask, mask)].sum())
    excess = internal - vol_s**2 / vol_v

    if lambda2 is None and G.is_connected:
        lambda2 = second_eigenvalue(G)
    ceiling = None
    if lambda2 is not None:
        ceiling = math.sqrt(max(0.0, 2.0 * (1.0 - lambda2)))

    return CutDiagnostics(
        conductance=cut / min(vol_s, vol_v - vol_s),
        mixing_residual=abs(excess) / vol_s,
        mixing_excess=excess / vol_s,
        lambda2_lower_bound=excess / (vol_s * (1.0 - vol_s / vol_v)),
        volume=vol_s,
        total_volume=vol_v,
        lambda2=lambda2,
        cheeger_ceiling=ceiling,
    )

