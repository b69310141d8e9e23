"""Bounded-degree graphings over finite weighted grids.

On an atomic space the degree-symmetry identity reduces to singleton
rectangles: ``eta({x} x {y}) = w_x [xy in E]``, so it holds iff the two
endpoints of every edge carry equal mass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import GraphonError, WeightedGrid
from .symmetry import WEIGHT_TOL, PermutationGroup, _search, _Structure


class GraphingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGraphing:
    grid: WeightedGrid
    edges: frozenset
    degree_bound: int

    def __post_init__(self):
        n = len(self.grid)
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphingError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphingError(f"edge {u}-{v} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        deg = self.degrees()
        if deg.size and deg.max() > self.degree_bound:
            v = int(deg.argmax())
            raise GraphingError(f"vertex {v} has degree {deg[v]} > bound {self.degree_bound}")

    @property
    def weights(self) -> np.ndarray:
        return self.grid.weights

    def __len__(self) -> int:
        return len(self.grid)

    def adjacency(self) -> np.ndarray:
        n = len(self.grid)
        a = np.zeros((n, n), dtype=int)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def to_json(self) -> str:
        return json.dumps(
            {"weights": self.weights.tolist(), "edges": [list(e) for e in sorted(self.edges)], "D": self.degree_bound}
        )

    @classmethod
    def from_json(cls, text: str) -> "FiniteGraphing":
        obj = json.loads(text)
        return make_graphing(WeightedGrid(np.asarray(obj["weights"], dtype=float)), obj["edges"], int(obj["D"]))


def make_graphing(grid: WeightedGrid, edges: Iterable, degree_bound: int) -> FiniteGraphing:
    if not isinstance(grid, WeightedGrid):
        grid = WeightedGrid(np.asarray(grid, dtype=float))
    return FiniteGraphing(grid, frozenset(tuple(e) for e in edges), int(degree_bound))


def _indicator(g: FiniteGraphing, s: Iterable[int]) -> np.ndarray:
    n = len(g)
    mask = np.zeros(n, dtype=bool)
    for x in s:
        x = int(x)
        if not 0 <= x < n:
            raise GraphingError(f"vertex {x} out of range")
        mask[x] = True
    return mask


def edge_measure(g: FiniteGraphing, a: Iterable[int], b: Iterable[int]) -> float:
    """``eta(A x B) = sum_{x in A} w_x * #{y in B : xy in E}``."""
    ma, mb = _indicator(g, a), _indicator(g, b)
    deg_b = g.adjacency()[:, mb].sum(axis=1)
    return float(np.dot(g.weights[ma], deg_b[ma]))


@dataclass(frozen=True)
class DegreeSymmetryReport:
    holds: bool
    max_violation: float
    witness: tuple[tuple[int], tuple[int]] | None


def check_degree_symmetry(g: FiniteGraphing, tol: float = 0.0) -> DegreeSymmetryReport:
    worst, witness = 0.0, None
    w = g.weights
    for u, v in sorted(g.edges):
        gap = abs(w[u] - w[v])
        if gap > worst:
            worst, witness = float(gap), ((u,), (v,))
    return DegreeSymmetryReport(worst <= tol, worst, witness if worst > tol else None)


def graphing_automorphisms(
    g: FiniteGraphing, method: str = "pruned", cap: int | None = None, null_atoms: str = "quotient"
) -> PermutationGroup:
    """Mass-preserving permutations mapping the edge set onto itself.

    Zero-mass atoms are invisible to the measure algebra, so by default they
    are quotiented out first and the group acts on the positive-mass
    vertices (in increasing index order).  ``null_atoms="keep"`` searches
    over all points instead.
    """
    if null_atoms not in ("quotient", "keep"):
        raise ValueError(f"unknown null_atoms mode {null_atoms!r}")
    if null_atoms == "quotient" and np.any(g.weights == 0):
        g = full_subgraphing(g, positive_support(g))
    return _search(_Structure(g.adjacency().astype(float), g.weights, 0.0, WEIGHT_TOL), method, cap)


def full_subgraphing(g: FiniteGraphing, keep: Iterable[int]) -> FiniteGraphing:
    """Induced subgraphing on ``keep``, which must contain every positive-mass vertex."""
    mask = _indicator(g, keep)
    dropped = np.flatnonzero(~mask & (g.weights > 0))
    if dropped.size:
        raise GraphingError(f"vertices {dropped.tolist()} carry positive mass")
    idx = np.flatnonzero(mask)
    pos = {int(x): i for i, x in enumerate(idx)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    try:
        grid = WeightedGrid(g.weights[idx], tuple(g.grid.point_ids[i] for i in idx))
    except GraphonError as exc:
        raise GraphingError(str(exc)) from exc
    return FiniteGraphing(grid, frozenset(edges), g.degree_bound)


def positive_support(g: FiniteGraphing) -> list[int]:
    return np.flatnonzero(g.weights > 0).tolist()
