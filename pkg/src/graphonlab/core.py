"""Graphons on finite weighted grids.

A grid is a finite probability space: a list of atoms with nonnegative
masses summing to one.  A graphon pairs a grid with a symmetric kernel
matrix.  Kernels are checked for *exact* symmetry; callers symmetrize
before construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

WEIGHT_SUM_TOL = 1e-12


class GraphonError(ValueError):
    """Raised when a grid, kernel or graphon violates its invariants."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedGrid:
    weights: np.ndarray
    point_ids: tuple = ()
    coords: np.ndarray | None = None

    def __post_init__(self):
        w = _frozen(np.ravel(self.weights))
        if w.size == 0:
            raise GraphonError("grid must have at least one point")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise GraphonError("weights must be finite and nonnegative")
        total = math.fsum(w.tolist())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise GraphonError(f"weights sum to {total!r}, not 1")
        ids = tuple(self.point_ids) if len(self.point_ids) else tuple(range(w.size))
        if len(ids) != w.size:
            raise GraphonError("point_ids and weights differ in length")
        if len(set(ids)) != len(ids):
            raise GraphonError("point_ids must be pairwise distinct")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "point_ids", ids)
        if self.coords is not None:
            c = _frozen(self.coords)
            if c.shape[0] != w.size:
                raise GraphonError("coords and weights differ in length")
            object.__setattr__(self, "coords", c)

    def __len__(self) -> int:
        return self.weights.size

    @classmethod
    def uniform(cls, n: int) -> "WeightedGrid":
        if n < 1:
            raise GraphonError("n must be >= 1")
        return cls(np.full(n, 1.0 / n))


def _check_square_symmetric(values: np.ndarray) -> np.ndarray:
    k = _frozen(values)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise GraphonError(f"kernel must be square, got shape {k.shape}")
    if not np.all(np.isfinite(k)):
        raise GraphonError("kernel has non-finite entries")
    if not np.array_equal(k, k.T):
        raise GraphonError("kernel is not exactly symmetric")
    return k


@dataclass(frozen=True, eq=False)
class Kernel:
    """Symmetric [0,1]-valued matrix."""

    values: np.ndarray
    signed = False

    def __post_init__(self):
        k = _check_square_symmetric(self.values)
        if k.size and (k.min() < 0.0 or k.max() > 1.0):
            raise GraphonError("kernel entries must lie in [0, 1]")
        object.__setattr__(self, "values", k)


@dataclass(frozen=True, eq=False)
class SignedKernel:
    """Symmetric real matrix; produced by spectral truncation."""

    values: np.ndarray
    signed = True

    def __post_init__(self):
        object.__setattr__(self, "values", _check_square_symmetric(self.values))


@dataclass(frozen=True, eq=False)
class Graphon:
    grid: WeightedGrid
    kernel: Kernel | SignedKernel
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kernel.values.shape[0] != len(self.grid):
            raise GraphonError(
                f"kernel is {self.kernel.values.shape[0]}x{self.kernel.values.shape[0]} "
                f"but grid has {len(self.grid)} points"
            )

    @property
    def weights(self) -> np.ndarray:
        return self.grid.weights

    @property
    def K(self) -> np.ndarray:
        return self.kernel.values

    @property
    def signed(self) -> bool:
        return self.kernel.signed

    def __len__(self) -> int:
        return len(self.grid)

    def permuted(self, perm: Sequence[int]) -> "Graphon":
        """Relabel points so that new point ``i`` is old point ``perm[i]``."""
        p = np.asarray(perm, dtype=int)
        kern = type(self.kernel)(self.K[np.ix_(p, p)])
        coords = None if self.grid.coords is None else self.grid.coords[p]
        grid = WeightedGrid(self.weights[p], tuple(self.grid.point_ids[i] for i in p), coords)
        return Graphon(grid, kern)

    def to_json(self) -> str:
        obj = {
            "weights": self.weights.tolist(),
            "kernel": self.K.tolist(),
            "signed": bool(self.signed),
        }
        if self.grid.coords is not None:
            obj["coords"] = self.grid.coords.tolist()
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "Graphon":
        obj = json.loads(text)
        coords = obj.get("coords")
        grid = WeightedGrid(
            np.asarray(obj["weights"], dtype=float),
            coords=None if coords is None else np.asarray(coords, dtype=float),
        )
        kern_cls = SignedKernel if obj.get("signed", False) else Kernel
        return cls(grid, kern_cls(np.asarray(obj["kernel"], dtype=float)))


def make_graphon(grid: WeightedGrid, kernel: Kernel | SignedKernel | np.ndarray) -> Graphon:
    if not isinstance(grid, WeightedGrid):
        grid = WeightedGrid(np.asarray(grid, dtype=float))
    if not isinstance(kernel, (Kernel, SignedKernel)):
        kernel = Kernel(np.asarray(kernel, dtype=float))
    return Graphon(grid, kernel)


def constant_graphon(n: int, c: float) -> Graphon:
    if not 0.0 <= c <= 1.0:
        raise GraphonError(f"constant {c} outside [0, 1]")
    return make_graphon(WeightedGrid.uniform(n), np.full((n, n), float(c)))


def distance_matrix(coords, metric: Callable[[object, object], float]) -> np.ndarray:
    pts = list(coords)
    n = len(pts)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                d[i, j] = metric(pts[i], pts[j])
    return d


def metric_graphon_from_matrix(dist: np.ndarray, weights, coords=None) -> Graphon:
    """Graphon whose kernel is the distance matrix rescaled by its maximum."""
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise GraphonError("distance matrix must be square")
    if np.any(d < 0):
        raise GraphonError("negative distance")
    if not np.array_equal(d, d.T):
        raise GraphonError("metric is not symmetric")
    if np.any(np.diag(d) != 0):
        raise GraphonError("metric must vanish on the diagonal")
    dmax = d.max() if d.size else 0.0
    kern = d / dmax if dmax > 0 else d.copy()
    grid = WeightedGrid(
        np.asarray(weights, dtype=float),
        coords=None if coords is None else np.asarray(coords, dtype=float),
    )
    return make_graphon(grid, kern)


def metric_graphon(coords, metric: Callable[[object, object], float], weights) -> Graphon:
    pts = list(coords)
    d = distance_matrix(pts, metric)
    try:
        arr = np.asarray(pts, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is not None and arr.ndim == 1:
        arr = arr[:, None]
    return metric_graphon_from_matrix(d, weights, arr)


def euclidean(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def sample_graph(g: Graphon, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw a W-random graph on ``n`` vertices.

    Returns ``(adjacency, points)`` where ``points[u]`` is the grid atom
    sampled for vertex ``u``.  The adjacency is a symmetric 0/1 integer
    matrix with zero diagonal.
    """
    if g.signed:
        raise GraphonError("cannot sample from a signed kernel")
    if n < 0:
        raise GraphonError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    pts = rng.choice(len(g), size=n, p=g.weights)
    probs = g.K[np.ix_(pts, pts)]
    coins = rng.random((n, n))
    upper = np.triu(coins < probs, k=1)
    adj = (upper | upper.T).astype(int)
    return adj, pts
