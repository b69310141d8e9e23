"""Neighborhood distance, purity diagnostics and Hausdorff distances."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Graphon
from .groups import GroupError, GroupModel, GroupMorphism

DEFAULT_PURITY_TOL = 1e-9


def neighborhood_distance(g: Graphon, i: int, j: int) -> float:
    """L^1(mu) distance between kernel rows ``i`` and ``j``."""
    n = len(g)
    for x in (i, j):
        if not 0 <= x < n:
            raise IndexError(f"point {x} out of range for grid of size {n}")
    return float(np.dot(g.weights, np.abs(g.K[i] - g.K[j])))


def neighborhood_matrix(g: Graphon) -> np.ndarray:
    """All pairwise neighborhood distances."""
    k, w = g.K, g.weights
    n = len(g)
    rw = np.empty((n, n))
    step = max(1, 2_000_000 // max(n * n, 1))
    for s in range(0, n, step):
        rw[s:s + step] = np.abs(k[s:s + step, None, :] - k[None, :, :]) @ w
    return np.minimum(rw, rw.T)


@dataclass(frozen=True)
class PurityReport:
    separated: bool
    min_rw: float
    full_support: bool

    @property
    def pure(self) -> bool:
        # Finite grids are compact, so completeness is automatic.
        return self.separated and self.full_support

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def purity_check(g: Graphon, tol: float = DEFAULT_PURITY_TOL) -> PurityReport:
    if tol < 0:
        raise ValueError("tol must be >= 0")
    n = len(g)
    if n == 1:
        min_rw = float("inf")
    else:
        rw = neighborhood_matrix(g)
        min_rw = float(rw[~np.eye(n, dtype=bool)].min())
    return PurityReport(min_rw > tol, min_rw, bool(np.all(g.weights > 0)))


def directed_hausdorff(dist: np.ndarray) -> float:
    """``max_a min_b d(a, b)`` for a distance block with rows A, columns B."""
    return float(dist.min(axis=1).max())


def hausdorff_from_matrix(dist: np.ndarray) -> float:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or 0 in d.shape:
        raise ValueError("both point sets must be nonempty")
    return max(directed_hausdorff(d), directed_hausdorff(d.T))


def hausdorff_distance(a: Sequence, b: Sequence, d: Callable) -> float:
    """Hausdorff distance between finite sets under metric ``d``.

    ``d`` may be a vectorized metric (like ``GroupModel.metric``) or a
    plain two-argument function.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both point sets must be nonempty")
    try:
        aa, bb = np.asarray(a), np.asarray(b)
        dist = np.asarray(d(aa[:, None], bb[None, :]), dtype=float)
        if dist.shape != (len(a), len(b)):
            raise ValueError
    except Exception:
        dist = np.array([[d(x, y) for y in b] for x in a], dtype=float)
    return hausdorff_from_matrix(dist)


def image_convergence(morphisms: Sequence[GroupMorphism], target: GroupModel | None = None) -> list[float]:
    """Hausdorff distance from each morphism's image to the whole target carrier."""
    if not morphisms:
        return []
    target = target if target is not None else morphisms[0].target
    carrier = target.elements()
    out = []
    for phi in morphisms:
        if phi.target != target:
            raise GroupError("morphisms must share the target group")
        out.append(hausdorff_distance(phi.image(), carrier, target.metric))
    return out
